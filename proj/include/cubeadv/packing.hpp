#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cubeadv/codes.hpp"
#include "cubeadv/geometry.hpp"
#include "cubeadv/rational.hpp"

namespace cubeadv {

/// A copy of the class-k cube placed at the slots named by `word`.
struct PlacedCube {
  int k = 2;
  Letters word;
  AxisBox box;
};

/// Q(w): product of interval_of(k, w_i, eps). Requires 0 < eps < 1/(k-1).
PlacedCube place(int k, const Letters& word, const Rat& eps);

enum class PackingMode { Materialized, Counted };

struct ClassCount {
  BigInt count;
  CountKind kind = CountKind::Exact;
};

struct EpsilonPacking {
  int d = 1;
  Rat eps;
  PackingMode mode = PackingMode::Materialized;
  std::vector<PlacedCube> cubes;   // Materialized only
  std::map<int, ClassCount> nu;    // nu_k for every class present (both modes)
  std::string provenance;          // e.g. "warmup d=3"

  /// Classes with a non-zero count, in increasing order.
  std::vector<int> classes() const;
};

/// (k-1)^d grid copies of the class-k cube. Admits the boundary eps = 1/(k-1).
EpsilonPacking homogeneous_packing(int k, int d, const Rat& eps, const Caps& caps = {});

/// Union of the placements of every code. Requires 0 < eps <= 1/S^2.
/// Materialized needs explicit codes; Counted uses the size certificates.
EpsilonPacking assemble(const CodeFamily& family, const Rat& eps, PackingMode mode,
                        const Caps& caps = {});

struct ValidationReport {
  std::vector<std::size_t> outside_unit;  // cube indices not inside [0,1]^d
  std::vector<std::size_t> wrong_side;    // cube indices whose side != (1+eps)/k
  std::vector<std::pair<std::size_t, std::size_t>> overlaps;  // (i, j), i < j, sorted

  bool valid() const { return outside_unit.empty() && wrong_side.empty() && overlaps.empty(); }
};

/// Exhaustive pairwise check of a materialized packing.
ValidationReport validate(const EpsilonPacking& p);

/// Same overlap set as validate(), found by sweeping along the first axis.
std::vector<std::pair<std::size_t, std::size_t>> overlaps_by_sweep(const std::vector<PlacedCube>& cubes);

struct Weight {
  Rat value;
  CountKind kind = CountKind::Exact;  // LowerBound when any class count is a lower bound
};

/// sum_k nu_k / (k-1)^d.
Weight weight(const EpsilonPacking& p);

enum class LemmaOutcome { Holds, FailsAtThisD, Inconclusive };

struct CentralLemmaCheck {
  LemmaOutcome outcome = LemmaOutcome::Inconclusive;
  int d = 0;
  int S = 0;
  Weight certified;
  long precision_bits = 0;  // working precision that settled the comparison
  std::string target_decimal;  // d / (5 ln d), display only
};

/// Compares 5 * W * ln d against d with outward-rounded ln d, doubling the
/// precision while the enclosure is too wide to decide.
LemmaOutcome compare_weight_to_target(const Rat& weight, int d, long& precision_bits);

/// Builds the probabilistic family and counted packing at eps = 1/d^2 and
/// checks w(U) >= d / (5 ln d).
CentralLemmaCheck central_lemma_check(int d, std::uint64_t seed, const BuildOptions& opts = {});

/// d / (5 ln d) rendered to `digits` significant digits.
std::string target_decimal(int d, int digits = 12);

std::string to_string(LemmaOutcome o);

}  // namespace cubeadv
