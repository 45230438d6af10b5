#include "cubeadv/codes.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include <boost/dynamic_bitset.hpp>

#include "bigfloat.hpp"
#include "cubeadv/errors.hpp"

namespace cubeadv {

namespace {

using Bits = boost::dynamic_bitset<std::uint64_t>;

Bits to_bits(const IndexSet& s, int d) {
  Bits b(static_cast<std::size_t>(d));
  for (int i : s) b.set(static_cast<std::size_t>(i));
  return b;
}

IndexSet set_minus(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool in_set(const IndexSet& s, int i) { return std::binary_search(s.begin(), s.end(), i); }

std::string letters_str(const Letters& w) {
  std::string s = "(";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(w[i]);
  }
  return s + ")";
}

}  // namespace

bool Code::contains(const Letters& w) const {
  if (static_cast<int>(w.size()) != d) return false;
  if (is_explicit()) {
    const auto& ws = words();
    return std::binary_search(ws.begin(), ws.end(), w);
  }
  const auto& ic = implicit();
  for (int i = 0; i < d; ++i) {
    const int v = w[static_cast<std::size_t>(i)];
    if (in_set(ic.F, i)) {
      if (v < 1 || v > k || v == k - 1) return false;
    } else if (v < 1 || v > k - 1) {
      return false;
    }
  }
  for (const auto& [l, J] : ic.J) {
    const bool hit = std::any_of(J.begin(), J.end(),
                                 [&](int i) { return w[static_cast<std::size_t>(i)] == k; });
    if (!hit) return false;
  }
  return true;
}

int S_of(int d) {
  if (d < 2) throw InvalidArgument("S_of needs d >= 2");
  const mpfr_prec_t prec = 160;
  detail::BigFloat ln_lo(prec), hi(prec);
  mpfr_set_ui(ln_lo.get(), static_cast<unsigned long>(d), MPFR_RNDN);
  mpfr_log(ln_lo.get(), ln_lo.get(), MPFR_RNDD);
  mpfr_mul_ui(ln_lo.get(), ln_lo.get(), 9, MPFR_RNDD);
  // hi >= 2d / (9 ln d); an upper enclosure resolves boundary ties upward.
  mpfr_ui_div(hi.get(), 2UL * static_cast<unsigned long>(d), ln_lo.get(), MPFR_RNDU);
  mpfr_ceil(hi.get(), hi.get());
  const long s = mpfr_get_si(hi.get(), MPFR_RNDU);
  return static_cast<int>(std::max(2L, s));
}

FFamily gen_F_family(int d, int S, std::uint64_t seed, std::uint64_t max_attempts) {
  if (d < 2) throw InvalidArgument("gen_F_family needs d >= 2");
  if (S < 2) throw InvalidArgument("gen_F_family needs S >= 2");
  max_attempts = std::max<std::uint64_t>(max_attempts, 1);
  const int r = (d + 1) / 2;
  const int count = S - 1;
  Rng rng(seed);
  std::vector<int> pool(static_cast<std::size_t>(d));
  std::vector<Bits> bits(static_cast<std::size_t>(count));

  FFamily fam;
  fam.sets.resize(static_cast<std::size_t>(count));
  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    for (int c = 0; c < count; ++c) {
      std::iota(pool.begin(), pool.end(), 0);
      for (int i = 0; i < r; ++i) {
        const auto j = static_cast<std::size_t>(i) +
                       static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(d - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
      }
      IndexSet s(pool.begin(), pool.begin() + r);
      std::sort(s.begin(), s.end());
      bits[static_cast<std::size_t>(c)] = to_bits(s, d);
      fam.sets[static_cast<std::size_t>(c)] = std::move(s);
    }
    int worst = -1;
    std::pair<int, int> worst_pair{2, 2};
    for (int a = 0; a < count; ++a) {
      for (int b = a + 1; b < count; ++b) {
        const int inter = static_cast<int>(
            (bits[static_cast<std::size_t>(a)] & bits[static_cast<std::size_t>(b)]).count());
        if (inter > worst) {
          worst = inter;
          worst_pair = {a + 2, b + 2};
        }
      }
    }
    worst = std::max(worst, 0);
    fam.max_intersection = worst;
    fam.worst_pair = worst_pair;
    fam.attempts = attempt;
    if (26L * worst < 7L * d) return fam;
  }
  throw RetriesExhausted("no F-family with all intersections < 7d/26 after " +
                         std::to_string(max_attempts) + " attempts (d=" + std::to_string(d) +
                         ", S=" + std::to_string(S) + "); worst pair F_" +
                         std::to_string(fam.worst_pair.first) + ", F_" +
                         std::to_string(fam.worst_pair.second) + " intersect in " +
                         std::to_string(fam.max_intersection));
}

BigInt count_good_exact(int k, const IndexSet& F, const JMap& J, int ie_cap) {
  if (k < 2) throw InvalidArgument("count_good_exact needs k >= 2");
  const int f = static_cast<int>(F.size());
  // Events live on positions within F.
  std::vector<Bits> events;
  for (const auto& [l, js] : J) {
    if (l < 2 || l >= k) throw InvalidArgument("J keyed outside [2, k-1]: " + std::to_string(l));
    Bits b(static_cast<std::size_t>(f));
    for (int i : js) {
      const auto it = std::lower_bound(F.begin(), F.end(), i);
      if (it == F.end() || *it != i) throw InvalidArgument("J(l,k) must lie inside F");
      b.set(static_cast<std::size_t>(it - F.begin()));
    }
    events.push_back(std::move(b));
  }
  // l-bad means "no letter k on J"; a larger J is a smaller event, so only
  // inclusion-minimal J sets matter for the union.
  std::sort(events.begin(), events.end(),
            [](const Bits& a, const Bits& b) { return a.count() < b.count(); });
  std::vector<Bits> minimal;
  for (const auto& e : events) {
    const bool implied = std::any_of(minimal.begin(), minimal.end(),
                                     [&](const Bits& m) { return m.is_subset_of(e); });
    if (!implied) minimal.push_back(e);
  }
  const int m = static_cast<int>(minimal.size());
  if (m > ie_cap) {
    throw CapExceeded("inclusion-exclusion over " + std::to_string(m) + " events exceeds cap " +
                      std::to_string(ie_cap));
  }

  // signed_counts[u] = sum over T with |union of J over T| = u of (-1)^|T|
  std::vector<std::int64_t> signed_counts(static_cast<std::size_t>(f) + 1, 0);
  std::vector<Bits> unions(static_cast<std::size_t>(m) + 1, Bits(static_cast<std::size_t>(f)));
  auto visit = [&](auto&& self, int next, std::size_t depth) -> void {
    signed_counts[unions[depth].count()] += (depth % 2 == 0) ? 1 : -1;
    for (int e = next; e < m; ++e) {
      unions[depth + 1] = unions[depth];
      unions[depth + 1] |= minimal[static_cast<std::size_t>(e)];
      self(self, e + 1, depth + 1);
    }
  };
  visit(visit, 0, 0);

  BigInt total = 0;
  const BigInt bad_alpha = k - 2;
  const BigInt alpha = k - 1;
  for (int u = 0; u <= f; ++u) {
    const auto c = signed_counts[static_cast<std::size_t>(u)];
    if (c == 0) continue;
    total += BigInt(static_cast<long>(c)) * pow(bad_alpha, static_cast<unsigned long>(u)) *
             pow(alpha, static_cast<unsigned long>(f - u));
  }
  return total;
}

Rat bound_good_fraction(int k, const JMap& J) {
  if (k < 2) throw InvalidArgument("bound_good_fraction needs k >= 2");
  Rat sum = 0;
  if (!J.empty()) {
    const Rat q(BigInt(k - 2), BigInt(k - 1));
    for (const auto& [l, js] : J) sum += pow(q, js.size());
  }
  return Rat(1) - sum;
}

namespace {

/// Per-coordinate alphabet of a code: letters that can appear at coordinate i.
std::vector<bool> coordinate_letters(const Code& c, int i) {
  std::vector<bool> seen(static_cast<std::size_t>(c.k) + 1, false);
  if (c.is_explicit()) {
    for (const auto& w : c.words()) seen[static_cast<std::size_t>(w[static_cast<std::size_t>(i)])] = true;
    return seen;
  }
  if (c.known_empty()) return seen;
  const bool onF = in_set(c.implicit().F, i);
  for (int v = 1; v <= c.k; ++v) {
    if (onF ? v != c.k - 1 : v <= c.k - 1) seen[static_cast<std::size_t>(v)] = true;
  }
  return seen;
}

void check_implicit_shape(const Code& c) {
  const auto& ic = c.implicit();
  for (std::size_t i = 0; i < ic.F.size(); ++i) {
    if (ic.F[i] < 0 || ic.F[i] >= c.d || (i > 0 && ic.F[i] <= ic.F[i - 1])) {
      throw InvalidArgument("implicit code F must be sorted indices in [0,d)");
    }
  }
  for (const auto& [l, js] : ic.J) {
    for (int i : js) {
      if (!in_set(ic.F, i)) throw InvalidArgument("implicit code J(l,k) must lie inside F");
    }
  }
}

/// Def.-level check for one cross pair: some i with u_i < ka < kb = w_i.
bool pair_separated(const Letters& u, int ka, const Letters& w, int kb) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < ka && w[i] == kb) return true;
  }
  return false;
}

}  // namespace

bool is_gapped(const Code& c) {
  if (!c.is_explicit()) check_implicit_shape(c);
  for (int i = 0; i < c.d; ++i) {
    const auto seen = coordinate_letters(c, i);
    if (seen[static_cast<std::size_t>(c.k - 1)] && seen[static_cast<std::size_t>(c.k)]) return false;
  }
  return true;
}

std::optional<Letters> sample_member(const Code& c, Rng& rng) {
  if (c.is_explicit()) {
    const auto& ws = c.words();
    if (ws.empty()) return std::nullopt;
    return ws[static_cast<std::size_t>(rng.below(ws.size()))];
  }
  if (c.known_empty()) return std::nullopt;
  const auto& ic = c.implicit();
  Letters w(static_cast<std::size_t>(c.d));
  for (int attempt = 0; attempt < 100'000; ++attempt) {
    std::size_t fi = 0;
    for (int i = 0; i < c.d; ++i) {
      if (fi < ic.F.size() && ic.F[fi] == i) {
        ++fi;
        // [k] \ {k-1}
        int v = rng.between(1, c.k - 1);
        if (v == c.k - 1) v = c.k;
        w[static_cast<std::size_t>(i)] = v;
      } else {
        w[static_cast<std::size_t>(i)] = rng.between(1, c.k - 1);
      }
    }
    if (c.contains(w)) return w;
  }
  return std::nullopt;
}

SeparationCheck are_separated(const Code& a, const Code& b, std::uint64_t samples,
                              std::uint64_t seed) {
  if (a.d != b.d) {
    throw DimensionMismatch("codes of dimension " + std::to_string(a.d) + " and " +
                            std::to_string(b.d));
  }
  if (a.k >= b.k) throw InvalidArgument("are_separated expects a.k < b.k");

  SeparationCheck out;
  if (a.is_explicit() && b.is_explicit()) {
    out.method = CheckMethod::Exhaustive;
    for (const auto& u : a.words()) {
      for (const auto& w : b.words()) {
        if (!pair_separated(u, a.k, w, b.k)) {
          out.separated = false;
          out.witness = std::make_pair(u, w);
          out.detail = "no separating coordinate for " + letters_str(u) + " and " + letters_str(w);
          return out;
        }
      }
    }
    out.separated = true;
    return out;
  }

  out.method = CheckMethod::Structural;
  const bool a_empty = a.is_explicit() ? a.words().empty() : a.known_empty();
  const bool b_empty = b.is_explicit() ? b.words().empty() : b.known_empty();
  if (a_empty || b_empty) {
    out.separated = true;
    out.detail = "vacuous: empty code";
    return out;
  }

  // Coordinates where every member of a stays below a.k.
  auto a_low_at = [&](int i) { return !coordinate_letters(a, i)[static_cast<std::size_t>(a.k)]; };

  if (!b.is_explicit()) {
    const auto& jb = b.implicit().J;
    const auto it = jb.find(a.k);
    if (it == jb.end()) {
      out.separated = false;
      out.detail = "code " + std::to_string(b.k) + " has no J(" + std::to_string(a.k) + ",k) guard";
      return out;
    }
    if (it->second.empty()) {
      out.separated = false;
      out.detail = "J(" + std::to_string(a.k) + "," + std::to_string(b.k) + ") is empty";
      return out;
    }
    for (int i : it->second) {
      if (!a_low_at(i)) {
        out.separated = false;
        out.detail = "code " + std::to_string(a.k) + " may reach letter " + std::to_string(a.k) +
                     " at guarded coordinate " + std::to_string(i + 1);
        return out;
      }
    }
  } else {
    for (const auto& w : b.words()) {
      bool ok = false;
      for (int i = 0; i < b.d && !ok; ++i) {
        ok = w[static_cast<std::size_t>(i)] == b.k && a_low_at(i);
      }
      if (!ok) {
        out.separated = false;
        out.detail = "word " + letters_str(w) + " has no guarded letter " + std::to_string(b.k);
        return out;
      }
    }
  }

  Rng rng(seed ^ (static_cast<std::uint64_t>(a.k) << 32) ^ static_cast<std::uint64_t>(b.k));
  for (std::uint64_t s = 0; s < samples; ++s) {
    auto u = sample_member(a, rng);
    auto w = sample_member(b, rng);
    if (!u || !w) continue;
    if (!pair_separated(*u, a.k, *w, b.k)) {
      out.separated = false;
      out.witness = std::make_pair(*u, *w);
      out.detail = "sampled pair violates separation";
      return out;
    }
  }
  out.separated = true;
  out.detail = "structural certificate";
  return out;
}

JMap j_sets(int k, const std::vector<IndexSet>& F) {
  if (static_cast<std::size_t>(k - 1) > F.size()) throw InvalidArgument("missing F-set for class " + std::to_string(k));
  JMap J;
  for (int l = 2; l < k; ++l) {
    J.emplace(l, set_minus(F[static_cast<std::size_t>(k - 2)], F[static_cast<std::size_t>(l - 2)]));
  }
  return J;
}

Code implicit_code(int k, int d, const std::vector<IndexSet>& F) {
  if (k < 2) throw InvalidArgument("class k must be >= 2");
  Code c;
  c.k = k;
  c.d = d;
  ImplicitCode ic;
  ic.J = j_sets(k, F);
  ic.F = F[static_cast<std::size_t>(k - 2)];
  for (const auto& [l, js] : ic.J) {
    if (js.empty()) c.empty_j.push_back(l);
  }
  c.repr = std::move(ic);
  check_implicit_shape(c);
  return c;
}

void certify_size(Code& c, const Rat& threshold, const Caps& caps) {
  const auto& ic = c.implicit();
  const BigInt full = pow(BigInt(c.k - 1), static_cast<unsigned long>(c.d));
  try {
    const BigInt good = count_good_exact(c.k, ic.F, ic.J, caps.ie_events);
    c.size = {CountKind::Exact,
              good * pow(BigInt(c.k - 1), static_cast<unsigned long>(c.d) - ic.F.size())};
  } catch (const CapExceeded&) {
    const Rat frac = bound_good_fraction(c.k, ic.J);
    c.size = {CountKind::LowerBound, frac.sign() > 0 ? ceil(frac * Rat(full)) : BigInt(0)};
  }
  c.certified_threshold = Rat(c.size.count) >= threshold * Rat(full);
}

namespace {

/// All members of an implicit code: good words on F (odometer over
/// [k] \ {k-1}), crossed with [k-1] off F. Guarded by the explicit cap.
std::vector<Letters> enumerate_words(const Code& c, const Caps& caps) {
  if (c.known_empty()) return {};
  const auto& ic = c.implicit();
  const BigInt cap(static_cast<unsigned long>(caps.explicit_words));
  if (c.size.count > cap || pow(BigInt(c.k - 1), ic.F.size()) > cap) {
    throw CapExceeded("code k=" + std::to_string(c.k) + " too large to enumerate");
  }
  const auto next = [](std::vector<int>& digits, int base) {
    for (std::size_t pos = digits.size(); pos > 0; --pos) {
      if (++digits[pos - 1] < base) return true;
      digits[pos - 1] = 0;
    }
    return false;
  };

  // Good restrictions to F, as letter vectors aligned with ic.F.
  std::vector<std::vector<int>> heads;
  std::vector<int> digits(ic.F.size(), 0);
  do {
    std::vector<int> head(digits.size());
    for (std::size_t i = 0; i < digits.size(); ++i) {
      head[i] = digits[i] + 1 == c.k - 1 ? c.k : digits[i] + 1;  // skip k-1
    }
    bool good = true;
    for (const auto& [l, js] : ic.J) {
      bool hit = false;
      for (int i : js) {
        const auto at = std::lower_bound(ic.F.begin(), ic.F.end(), i) - ic.F.begin();
        hit = hit || head[static_cast<std::size_t>(at)] == c.k;
      }
      good = good && hit;
    }
    if (good) heads.push_back(std::move(head));
  } while (next(digits, c.k - 1));

  IndexSet rest;
  for (int i = 0; i < c.d; ++i) {
    if (!in_set(ic.F, i)) rest.push_back(i);
  }
  std::vector<Letters> out;
  for (const auto& head : heads) {
    std::vector<int> tail(rest.size(), 0);
    do {
      Letters w(static_cast<std::size_t>(c.d));
      for (std::size_t i = 0; i < ic.F.size(); ++i) w[static_cast<std::size_t>(ic.F[i])] = head[i];
      for (std::size_t i = 0; i < rest.size(); ++i) w[static_cast<std::size_t>(rest[i])] = tail[i] + 1;
      out.push_back(std::move(w));
      if (out.size() > caps.explicit_words) {
        throw CapExceeded("code k=" + std::to_string(c.k) + " too large to enumerate");
      }
    } while (next(tail, c.k - 1));
  }
  std::sort(out.begin(), out.end());
  return out;
}

void materialize(Code& c, const Caps& caps) {
  auto words = enumerate_words(c, caps);
  if (c.size.kind == CountKind::Exact && BigInt(static_cast<unsigned long>(words.size())) != c.size.count) {
    throw Error("explicit enumeration disagrees with exact count for k=" + std::to_string(c.k));
  }
  c.size = {CountKind::Exact, BigInt(static_cast<unsigned long>(words.size()))};
  c.repr = std::move(words);
}

}  // namespace

CodeFamily warmup_family(int d, const Caps& caps) {
  if (d < 2) throw InvalidArgument("warm-up family needs d >= 2");
  CodeFamily fam;
  fam.d = d;
  fam.S = d;
  fam.kind = FamilyKind::Warmup;
  // The distinguished coordinate of L_k is k itself, so F_k = {k}.
  for (int k = 2; k <= d; ++k) fam.F.push_back(IndexSet{k - 1});
  fam.max_intersection = 0;
  const Rat threshold(BigInt(10), BigInt(11));
  for (int k = 2; k <= d; ++k) {
    Code c = implicit_code(k, d, fam.F);
    certify_size(c, threshold, caps);
    if (c.size.count <= BigInt(static_cast<unsigned long>(caps.explicit_words))) {
      materialize(c, caps);
    }
    fam.codes.push_back(std::move(c));
  }
  return fam;
}

CodeFamily build_separated_family(int d, std::uint64_t seed, const BuildOptions& opts) {
  if (d < 2) throw InvalidArgument("family needs d >= 2");
  CodeFamily fam;
  fam.d = d;
  fam.S = S_of(d);
  fam.kind = FamilyKind::Probabilistic;
  fam.seed = seed;
  FFamily ff = gen_F_family(d, fam.S, seed, opts.max_attempts);
  fam.F = std::move(ff.sets);
  fam.max_intersection = ff.max_intersection;
  fam.attempts = ff.attempts;
  for (int k = 2; k <= fam.S; ++k) {
    Code c = implicit_code(k, d, fam.F);
    certify_size(c, opts.threshold, opts.caps);
    if (opts.mode == CodeMode::Explicit) materialize(c, opts.caps);
    fam.codes.push_back(std::move(c));
  }
  return fam;
}

FamilyCheck verify_family(const CodeFamily& family, std::uint64_t samples) {
  FamilyCheck out;
  for (const auto& c : family.codes) {
    if (!is_gapped(c)) {
      out.ok = false;
      out.problems.push_back("code k=" + std::to_string(c.k) + " is not gapped");
    }
  }
  for (std::size_t a = 0; a < family.codes.size(); ++a) {
    for (std::size_t b = a + 1; b < family.codes.size(); ++b) {
      const auto r = are_separated(family.codes[a], family.codes[b], samples, family.seed);
      if (!r.separated) {
        out.ok = false;
        out.problems.push_back("codes k=" + std::to_string(family.codes[a].k) + " and k=" +
                               std::to_string(family.codes[b].k) + " not separated: " + r.detail);
      }
    }
  }
  return out;
}

}  // namespace cubeadv
