#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cubeadv/codes.hpp"
#include "cubeadv/packing.hpp"
#include "cubeadv/rational.hpp"

namespace cubeadv {

/// How the multiplier of the 2*M*multiplier copies is chosen.
///   Full:       multiplier = prod over k in K(U) of (k-1)^d
///   Reduced(t): multiplier = t * lcm over k in K(U) of (k-1)^d
struct Scale {
  bool full = true;
  BigInt t = 1;

  static Scale Full() { return {}; }
  static Scale Reduced(BigInt t) { return {false, std::move(t)}; }

  /// "full" or "reduced:<t>".
  std::string to_string() const;
  static Scale parse(std::string_view text);
};

struct Segment {
  int k = 2;
  BigInt count;
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Run-length encoded adversarial input: each segment is `count` copies of
/// the class-k cube, segments in increasing k.
struct InstanceStream {
  int d = 1;
  Rat eps;
  BigInt M = 1;
  BigInt multiplier = 1;
  std::vector<Segment> segments;

  BigInt total_items() const;
};

InstanceStream build_instance(const EpsilonPacking& p, const BigInt& M, const Scale& scale,
                              const Caps& caps = {});

struct OfflineCertificate {
  BigInt bin_count;
  /// bins[b] lists indices into the source packing's cubes; present only for
  /// small instances with a materialized source.
  std::optional<std::vector<std::vector<std::size_t>>> bins;
  bool assignment_valid = false;
};

/// 2 * M * multiplier bins, each holding one copy of the source packing.
OfflineCertificate offline_bound(const InstanceStream& inst, const EpsilonPacking* source = nullptr,
                                 const Caps& caps = {});

/// (k-1)^d, the assumed most copies of the class-k cube one bin can hold.
BigInt per_class_capacity(int k, int d);

/// sum over segments of max(0, count / (k-1)^d - M), floored: bins any
/// bounded-space algorithm with M open bins must open on this stream.
BigInt universal_lower_bound(const InstanceStream& inst);

/// nu_k = count / (2 * M * multiplier); the weight of the source packing.
Rat instance_weight(const InstanceStream& inst);

/// Per-item class sequence. Throws CapExceeded above caps.per_item.
std::vector<int> expand(const InstanceStream& inst, const Caps& caps = {});

/// Line format: "d=<int> eps=<p/q> M=<bigint> mult=<bigint>" then "<k> <count>" per segment.
std::string write_instance(const InstanceStream& inst);
InstanceStream parse_instance(std::string_view text);

}  // namespace cubeadv
