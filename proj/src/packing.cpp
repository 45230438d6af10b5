#include "cubeadv/packing.hpp"

#include <algorithm>
#include <numeric>

#include "bigfloat.hpp"
#include "cubeadv/errors.hpp"

namespace cubeadv {

std::vector<int> EpsilonPacking::classes() const {
  std::vector<int> out;
  for (const auto& [k, c] : nu) {
    if (c.count > 0) out.push_back(k);
  }
  return out;
}

PlacedCube place(int k, const Letters& word, const Rat& eps) {
  std::vector<Interval> dims;
  dims.reserve(word.size());
  for (int v : word) dims.push_back(interval_of(k, v, eps));
  return PlacedCube{k, word, AxisBox(std::move(dims))};
}

namespace {

PlacedCube place_grid(int k, const Letters& word, const Rat& eps) {
  std::vector<Interval> dims;
  dims.reserve(word.size());
  for (int v : word) dims.push_back(grid_interval(k, v, eps));
  return PlacedCube{k, word, AxisBox(std::move(dims))};
}

BigInt capacity(int k, int d) { return pow(BigInt(k - 1), static_cast<unsigned long>(d)); }

}  // namespace

EpsilonPacking homogeneous_packing(int k, int d, const Rat& eps, const Caps& caps) {
  if (k < 2 || d < 1) throw InvalidArgument("homogeneous packing needs k >= 2 and d >= 1");
  if (capacity(k, d) > BigInt(static_cast<unsigned long>(caps.explicit_words))) {
    throw CapExceeded("(k-1)^d exceeds the explicit cap");
  }
  EpsilonPacking p;
  p.d = d;
  p.eps = eps;
  p.mode = PackingMode::Materialized;
  p.provenance = "homogeneous k=" + std::to_string(k);
  Letters w(static_cast<std::size_t>(d), 1);
  while (true) {
    p.cubes.push_back(place_grid(k, w, eps));
    std::size_t pos = w.size();
    while (pos > 0 && w[pos - 1] == k - 1) w[--pos] = 1;
    if (pos == 0) break;
    ++w[pos - 1];
  }
  p.nu[k] = {BigInt(static_cast<unsigned long>(p.cubes.size())), CountKind::Exact};
  return p;
}

EpsilonPacking assemble(const CodeFamily& family, const Rat& eps, PackingMode mode,
                        const Caps& caps) {
  const Rat limit(BigInt(1), BigInt(family.S) * family.S);
  if (eps.sign() <= 0 || eps > limit) {
    throw InvalidArgument("eps " + eps.to_string() + " outside (0, 1/S^2] with S=" +
                          std::to_string(family.S));
  }
  EpsilonPacking p;
  p.d = family.d;
  p.eps = eps;
  p.mode = mode;
  p.provenance = std::string(family.kind == FamilyKind::Warmup ? "warmup" : "probabilistic") +
                 " d=" + std::to_string(family.d) + " S=" + std::to_string(family.S) +
                 " seed=" + std::to_string(family.seed);

  if (mode == PackingMode::Materialized) {
    BigInt total = 0;
    for (const auto& c : family.codes) {
      if (!c.is_explicit()) {
        throw CapExceeded("code k=" + std::to_string(c.k) + " is implicit; cannot materialize");
      }
      total += static_cast<unsigned long>(c.words().size());
    }
    if (total > BigInt(static_cast<unsigned long>(caps.explicit_words))) {
      throw CapExceeded("materialized packing exceeds the explicit cap");
    }
    for (const auto& c : family.codes) {
      for (const auto& w : c.words()) p.cubes.push_back(place(c.k, w, eps));
      if (!c.words().empty()) {
        p.nu[c.k] = {BigInt(static_cast<unsigned long>(c.words().size())), CountKind::Exact};
      }
    }
    return p;
  }

  for (const auto& c : family.codes) {
    if (c.size.count > capacity(c.k, family.d) || c.size.count < 0) {
      throw InvalidArgument("class count outside [0, (k-1)^d] for k=" + std::to_string(c.k));
    }
    if (c.size.count > 0) p.nu[c.k] = {c.size.count, c.size.kind};
  }
  return p;
}

ValidationReport validate(const EpsilonPacking& p) {
  if (p.mode != PackingMode::Materialized) {
    throw InvalidArgument("validate needs a materialized packing");
  }
  ValidationReport r;
  const auto& cubes = p.cubes;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    const auto& box = cubes[i].box;
    if (!box_in_unit(box)) r.outside_unit.push_back(i);
    const Rat side = side_length(cubes[i].k, p.eps);
    bool ok = box.dim() == static_cast<std::size_t>(p.d);
    for (std::size_t a = 0; ok && a < box.dim(); ++a) ok = box[a].length() == side;
    if (!ok) r.wrong_side.push_back(i);
  }
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    for (std::size_t j = i + 1; j < cubes.size(); ++j) {
      if (boxes_overlap(cubes[i].box, cubes[j].box)) r.overlaps.emplace_back(i, j);
    }
  }
  return r;
}

std::vector<std::pair<std::size_t, std::size_t>> overlaps_by_sweep(const std::vector<PlacedCube>& cubes) {
  std::vector<std::size_t> order(cubes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cubes[a].box[0].lo < cubes[b].box[0].lo;
  });
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::vector<std::size_t> active;
  for (std::size_t idx : order) {
    const Rat& lo = cubes[idx].box[0].lo;
    // Open intervals: anything ending at or before lo is gone for good.
    std::erase_if(active, [&](std::size_t a) { return cubes[a].box[0].hi <= lo; });
    for (std::size_t a : active) {
      bool hit = true;
      for (std::size_t ax = 1; hit && ax < cubes[idx].box.dim(); ++ax) {
        hit = intervals_overlap(cubes[a].box[ax], cubes[idx].box[ax]);
      }
      if (hit) out.emplace_back(std::min(a, idx), std::max(a, idx));
    }
    active.push_back(idx);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Weight weight(const EpsilonPacking& p) {
  Weight w;
  w.value = 0;
  for (const auto& [k, c] : p.nu) {
    w.value += Rat(c.count, capacity(k, p.d));
    if (c.kind == CountKind::LowerBound) w.kind = CountKind::LowerBound;
  }
  return w;
}

LemmaOutcome compare_weight_to_target(const Rat& weight, int d, long& precision_bits) {
  if (d < 2) throw InvalidArgument("central lemma check needs d >= 2");
  if (weight.sign() <= 0) return LemmaOutcome::FailsAtThisD;
  long prec = precision_bits > 0 ? precision_bits : detail::precision_bits();
  const long ceiling = std::max(prec, 1L << 16);
  for (;; prec *= 2) {
    const auto p = static_cast<mpfr_prec_t>(prec);
    detail::BigFloat lo(p), hi(p), w_lo(p), w_hi(p);
    mpfr_set_ui(lo.get(), static_cast<unsigned long>(d), MPFR_RNDN);
    mpfr_log(lo.get(), lo.get(), MPFR_RNDD);
    mpfr_set_ui(hi.get(), static_cast<unsigned long>(d), MPFR_RNDN);
    mpfr_log(hi.get(), hi.get(), MPFR_RNDU);
    mpfr_set_q(w_lo.get(), weight.raw().get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(w_hi.get(), weight.raw().get_mpq_t(), MPFR_RNDU);
    // [lo, hi] encloses 5 * W * ln d.
    mpfr_mul(lo.get(), lo.get(), w_lo.get(), MPFR_RNDD);
    mpfr_mul_ui(lo.get(), lo.get(), 5, MPFR_RNDD);
    mpfr_mul(hi.get(), hi.get(), w_hi.get(), MPFR_RNDU);
    mpfr_mul_ui(hi.get(), hi.get(), 5, MPFR_RNDU);
    precision_bits = prec;
    if (mpfr_cmp_ui(lo.get(), static_cast<unsigned long>(d)) >= 0) return LemmaOutcome::Holds;
    if (mpfr_cmp_ui(hi.get(), static_cast<unsigned long>(d)) < 0) return LemmaOutcome::FailsAtThisD;
    if (prec * 2 > ceiling) return LemmaOutcome::Inconclusive;
  }
}

std::string target_decimal(int d, int digits) {
  detail::BigFloat t(128);
  mpfr_set_ui(t.get(), static_cast<unsigned long>(d), MPFR_RNDN);
  mpfr_log(t.get(), t.get(), MPFR_RNDN);
  mpfr_mul_ui(t.get(), t.get(), 5, MPFR_RNDN);
  mpfr_ui_div(t.get(), static_cast<unsigned long>(d), t.get(), MPFR_RNDN);
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, t.get());
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

CentralLemmaCheck central_lemma_check(int d, std::uint64_t seed, const BuildOptions& opts) {
  if (d < 2) throw InvalidArgument("central lemma check needs d >= 2");
  BuildOptions implicit_opts = opts;
  implicit_opts.mode = CodeMode::Implicit;
  const CodeFamily fam = build_separated_family(d, seed, implicit_opts);
  const Rat eps(BigInt(1), BigInt(d) * d);
  const EpsilonPacking pk = assemble(fam, eps, PackingMode::Counted, opts.caps);
  CentralLemmaCheck out;
  out.d = d;
  out.S = fam.S;
  out.certified = weight(pk);
  out.precision_bits = 0;
  out.outcome = compare_weight_to_target(out.certified.value, d, out.precision_bits);
  out.target_decimal = target_decimal(d);
  return out;
}

std::string to_string(LemmaOutcome o) {
  switch (o) {
    case LemmaOutcome::Holds:
      return "holds";
    case LemmaOutcome::FailsAtThisD:
      return "failsAtThisD";
    case LemmaOutcome::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

}  // namespace cubeadv
