#pragma once

#include <cstdint>
#include <functional>
#include <list>
#include <memory>
#include <string>
#include <vector>

#include "cubeadv/adversary.hpp"
#include "cubeadv/packing.hpp"
#include "cubeadv/rational.hpp"

namespace cubeadv {

/// An online bounded-space bin packing algorithm for hypercube items.
///
/// Items arrive as copies of the class-k cube. Implementations that can
/// process a whole run of identical items arithmetically override
/// on_segment and report supports_counted(); everything else is fed one
/// item at a time through on_item.
class OnlineAlgorithm {
public:
  virtual ~OnlineAlgorithm() = default;

  virtual std::string name() const = 0;
  virtual std::size_t declared_m() const = 0;
  virtual bool supports_counted() const { return false; }

  /// Returns true when the item opened a new bin.
  virtual bool on_item(int k) = 0;
  /// Returns the number of bins opened while packing `count` items.
  virtual BigInt on_segment(int k, const BigInt& count);

  virtual std::size_t open_bins() const = 0;
  /// Every bin ever opened (closed plus still open).
  virtual BigInt total_bins() const = 0;

  /// Bins whose placed cubes failed the packing validator at close time.
  virtual std::uint64_t geometry_failures() const { return 0; }
  virtual std::uint64_t bins_validated() const { return 0; }
};

struct AlgorithmParams {
  int d = 1;
  Rat eps;
  std::size_t M = 1;
  bool materialize = false;  // place cubes and validate each bin when it closes
};

/// One open bin per class; a class bin fills its (k-1)^d grid slots in
/// lexicographic word order and closes when full. Opening a bin when M are
/// already open closes the least recently used one.
class ClassNextFit final : public OnlineAlgorithm {
public:
  explicit ClassNextFit(AlgorithmParams params);

  std::string name() const override { return "ClassNextFit"; }
  std::size_t declared_m() const override { return params_.M; }
  bool supports_counted() const override { return true; }

  bool on_item(int k) override;
  BigInt on_segment(int k, const BigInt& count) override;

  std::size_t open_bins() const override { return open_.size(); }
  BigInt total_bins() const override { return total_; }
  std::uint64_t geometry_failures() const override { return geometry_failures_; }
  std::uint64_t bins_validated() const override { return bins_validated_; }

private:
  struct Bin {
    int k;
    BigInt remaining;
    BigInt placed;
    std::vector<PlacedCube> cubes;
  };

  std::list<Bin>::iterator find(int k);
  std::list<Bin>::iterator open_bin(int k);
  void close(std::list<Bin>::iterator it);
  void place_next(Bin& bin);

  AlgorithmParams params_;
  std::list<Bin> open_;  // front = least recently used
  BigInt total_ = 0;
  std::uint64_t geometry_failures_ = 0;
  std::uint64_t bins_validated_ = 0;
};

using AlgorithmFactory = std::function<std::unique_ptr<OnlineAlgorithm>(const AlgorithmParams&)>;

/// Adds or replaces an algorithm under `name`.
void register_algorithm(const std::string& name, AlgorithmFactory factory);
/// Throws UnknownAlgorithm.
std::unique_ptr<OnlineAlgorithm> make_algorithm(const std::string& name, const AlgorithmParams& params);
std::vector<std::string> algorithm_names();

enum class SimMode { Counted, PerItem };

struct SegmentResult {
  int k = 2;
  BigInt bins_opened;
  friend bool operator==(const SegmentResult&, const SegmentResult&) = default;
};

struct SimReport {
  std::string alg;
  BigInt M;
  std::vector<SegmentResult> per_segment;
  BigInt total_bins;
  BigInt offline_bound;
  BigInt universal_lb;
  Rat ratio;  // total_bins / offline_bound

  // Instrumentation; not part of report equality.
  std::uint64_t space_checks = 0;
  std::uint64_t bins_validated = 0;
  std::uint64_t geometry_failures = 0;

  friend bool operator==(const SimReport& a, const SimReport& b) {
    return a.alg == b.alg && a.M == b.M && a.per_segment == b.per_segment &&
           a.total_bins == b.total_bins && a.offline_bound == b.offline_bound &&
           a.universal_lb == b.universal_lb && a.ratio == b.ratio;
  }
};

/// Feeds the stream in order, checking open bins <= declared M after every
/// event (segment or item); throws BoundedSpaceViolation otherwise.
SimReport run(const InstanceStream& inst, OnlineAlgorithm& alg, SimMode mode, const Caps& caps = {});

/// Convenience: builds the named algorithm with M = inst.M.
SimReport run(const InstanceStream& inst, const std::string& alg, SimMode mode,
              bool materialize = false, const Caps& caps = {});

struct RatioCheck {
  Rat weight;
  bool at_least_half_weight = false;  // ratio >= w/2
  bool equals_weight = false;         // ratio == w
  bool universal_at_least_half = false;  // universal_lb / offline >= w/2
};

RatioCheck ratio_check(const SimReport& report, const Rat& weight);
RatioCheck ratio_check(const SimReport& report, const EpsilonPacking& p);

}  // namespace cubeadv
