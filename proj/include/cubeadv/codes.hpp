#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cubeadv/random.hpp"
#include "cubeadv/rational.hpp"

namespace cubeadv {

/// Letters of a d-letter word over [k] = {1..k}.
using Letters = std::vector<int>;
/// Sorted, duplicate-free, 0-based coordinate indices.
using IndexSet = std::vector<int>;
/// J(l, k) keyed by l.
using JMap = std::map<int, IndexSet>;

struct Caps {
  std::uint64_t explicit_words = 1'000'000;  // words per explicitly stored code
  int ie_events = 20;                        // inclusion-exclusion events
  std::uint64_t per_item = 100'000;          // per-item stream expansion
  std::uint64_t validate_cubes = 20'000;     // materialized O(n^2) validation
  std::size_t max_decimal_digits = 1'000'000;
};

enum class CountKind { Exact, LowerBound };

struct SizeCertificate {
  CountKind kind = CountKind::Exact;
  BigInt count;
};

/// L_k = L_k' x [k-1]^([d] \ F): letters on F avoid k-1, letters off F stay
/// below k, and for every l some i in J(l,k) carries letter k.
struct ImplicitCode {
  IndexSet F;
  JMap J;
};

struct Code {
  int k = 2;
  int d = 1;
  std::variant<std::vector<Letters>, ImplicitCode> repr;
  SizeCertificate size;
  bool certified_threshold = false;  // |L_k| >= threshold * (k-1)^d certified
  std::vector<int> empty_j;          // classes l with J(l,k) empty (code is then empty)

  bool is_explicit() const { return std::holds_alternative<std::vector<Letters>>(repr); }
  const std::vector<Letters>& words() const { return std::get<std::vector<Letters>>(repr); }
  const ImplicitCode& implicit() const { return std::get<ImplicitCode>(repr); }
  bool known_empty() const { return size.kind == CountKind::Exact && size.count == 0; }

  /// Membership predicate (explicit lookup or the implicit rule).
  bool contains(const Letters& w) const;
};

enum class FamilyKind { Warmup, Probabilistic };

struct CodeFamily {
  int d = 2;
  int S = 2;
  FamilyKind kind = FamilyKind::Warmup;
  std::uint64_t seed = 0;
  std::vector<IndexSet> F;    // F[k-2] for k = 2..S
  std::vector<Code> codes;    // codes[k-2] for k = 2..S
  int max_intersection = 0;   // max |F_k cap F_k'| over pairs
  std::uint64_t attempts = 1; // F-family samples drawn

  const Code& code(int k) const { return codes.at(static_cast<std::size_t>(k - 2)); }
};

/// ceil(2d / (9 ln d)) clamped to at least 2.
int S_of(int d);

struct FFamily {
  std::vector<IndexSet> sets;  // sets[k-2], each of size ceil(d/2)
  int max_intersection = 0;
  std::pair<int, int> worst_pair{0, 0};  // classes (k, k') attaining it
  std::uint64_t attempts = 0;
};

/// Whole-family rejection sampling until 26 |F_k cap F_k'| < 7d for all pairs.
/// `max_attempts` bounds the number of families drawn (at least one).
/// Throws RetriesExhausted naming the worst pair of the last attempt.
FFamily gen_F_family(int d, int S, std::uint64_t seed, std::uint64_t max_attempts);

/// Warm-up family: L_k = { w : w_k = k, w_i < k elsewhere } for 2 <= k <= d.
CodeFamily warmup_family(int d, const Caps& caps = {});

bool is_gapped(const Code& c);

enum class CheckMethod { Exhaustive, Structural };

struct SeparationCheck {
  bool separated = false;
  CheckMethod method = CheckMethod::Exhaustive;
  std::optional<std::pair<Letters, Letters>> witness;  // violating pair, if found
  std::string detail;
};

/// Separation of a (smaller class) and b (larger class). Exhaustive when
/// both are explicit; otherwise a structural certificate plus `samples`
/// random member pairs checked directly. Throws DimensionMismatch.
SeparationCheck are_separated(const Code& a, const Code& b, std::uint64_t samples,
                              std::uint64_t seed = 0);

/// Number of words over ([k] \ {k-1})^F that are not l-bad for any l in J,
/// by inclusion-exclusion over the bad events. Identical or implied events
/// are merged first; throws CapExceeded when more than `ie_cap` remain.
BigInt count_good_exact(int k, const IndexSet& F, const JMap& J, int ie_cap = 20);

/// Union-bound lower bound 1 - sum_l (1 - 1/(k-1))^|J(l,k)| on the good fraction.
Rat bound_good_fraction(int k, const JMap& J);

/// Size certificate of an implicit code: exact count via count_good_exact,
/// else the ceiling of the union bound times (k-1)^d. Also sets
/// certified_threshold.
void certify_size(Code& c, const Rat& threshold, const Caps& caps);

/// J(l,k) = F_k \ F_l for 2 <= l < k, from the family's F-sets (F[k-2]).
JMap j_sets(int k, const std::vector<IndexSet>& F);

/// Implicit code for class k with F_k = F[k-2] and J from j_sets; size
/// certificate left unset.
Code implicit_code(int k, int d, const std::vector<IndexSet>& F);

enum class CodeMode { Explicit, Implicit };

struct BuildOptions {
  CodeMode mode = CodeMode::Implicit;
  Rat threshold = Rat(BigInt(10), BigInt(11));
  Caps caps;
  std::uint64_t max_attempts = 1'000'000;
};

/// Probabilistic separated family for the given seed.
CodeFamily build_separated_family(int d, std::uint64_t seed, const BuildOptions& opts = {});

/// Uniform-ish random member (rejection from the implicit rule, uniform pick
/// for explicit codes). nullopt when the code is empty or rejection gives up.
std::optional<Letters> sample_member(const Code& c, Rng& rng);

struct FamilyCheck {
  bool ok = true;
  std::vector<std::string> problems;
};

/// Re-derives gappedness of every code and separation of every pair.
FamilyCheck verify_family(const CodeFamily& family, std::uint64_t samples = 16);

}  // namespace cubeadv
