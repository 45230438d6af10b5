#include "cubeadv/simulator.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>

#include "cubeadv/errors.hpp"

namespace cubeadv {

BigInt OnlineAlgorithm::on_segment(int k, const BigInt& count) {
  BigInt opened = 0;
  for (BigInt i = 0; i < count; ++i) {
    if (on_item(k)) ++opened;
  }
  return opened;
}

ClassNextFit::ClassNextFit(AlgorithmParams params) : params_(std::move(params)) {
  if (params_.M < 1) throw InvalidArgument("ClassNextFit needs M >= 1");
  if (params_.d < 1) throw InvalidArgument("ClassNextFit needs d >= 1");
}

std::list<ClassNextFit::Bin>::iterator ClassNextFit::find(int k) {
  return std::find_if(open_.begin(), open_.end(), [k](const Bin& b) { return b.k == k; });
}

void ClassNextFit::close(std::list<Bin>::iterator it) {
  if (params_.materialize && !it->cubes.empty()) {
    EpsilonPacking p;
    p.d = params_.d;
    p.eps = params_.eps;
    p.cubes = std::move(it->cubes);
    ++bins_validated_;
    if (!validate(p).valid()) ++geometry_failures_;
  }
  open_.erase(it);
}

std::list<ClassNextFit::Bin>::iterator ClassNextFit::open_bin(int k) {
  if (open_.size() >= params_.M) close(open_.begin());
  ++total_;
  return open_.insert(open_.end(), Bin{k, per_class_capacity(k, params_.d), 0, {}});
}

void ClassNextFit::place_next(Bin& bin) {
  if (params_.materialize) {
    // Slot index -> word in [k-1]^d, most significant coordinate first.
    BigInt idx = bin.placed;
    Letters w(static_cast<std::size_t>(params_.d), 1);
    const BigInt base = bin.k - 1;
    for (std::size_t pos = w.size(); pos > 0; --pos) {
      const BigInt digit = idx % base;
      w[pos - 1] = static_cast<int>(digit.get_si()) + 1;
      idx /= base;
    }
    bin.cubes.push_back(place(bin.k, w, params_.eps));
  }
  ++bin.placed;
  --bin.remaining;
}

bool ClassNextFit::on_item(int k) {
  auto it = find(k);
  const bool opened = it == open_.end();
  if (opened) {
    it = open_bin(k);
  } else {
    open_.splice(open_.end(), open_, it);  // most recently used
  }
  place_next(*it);
  if (it->remaining == 0) close(it);
  return opened;
}

BigInt ClassNextFit::on_segment(int k, const BigInt& count) {
  if (params_.materialize) return OnlineAlgorithm::on_segment(k, count);
  BigInt left = count;
  auto it = find(k);
  if (it != open_.end() && left > 0) {
    open_.splice(open_.end(), open_, it);
    const BigInt use = std::min(left, it->remaining);
    it->remaining -= use;
    it->placed += use;
    left -= use;
    if (it->remaining == 0) close(it);
  }
  if (left == 0) return 0;
  const BigInt cap = per_class_capacity(k, params_.d);
  BigInt fresh;
  mpz_cdiv_q(fresh.get_mpz_t(), left.get_mpz_t(), cap.get_mpz_t());
  // Only the first fresh bin can force an eviction; the rest replace a full bin.
  it = open_bin(k);
  total_ += fresh - 1;
  const BigInt in_last = left - (fresh - 1) * cap;
  it->placed = in_last;
  it->remaining = cap - in_last;
  if (it->remaining == 0) close(it);
  return fresh;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

struct Registry {
  std::mutex mu;
  std::map<std::string, std::pair<std::string, AlgorithmFactory>> by_key;

  Registry() {
    by_key["classnextfit"] = {"ClassNextFit", [](const AlgorithmParams& p) {
                                return std::make_unique<ClassNextFit>(p);
                              }};
  }
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

void register_algorithm(const std::string& name, AlgorithmFactory factory) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  r.by_key[lower(name)] = {name, std::move(factory)};
}

std::unique_ptr<OnlineAlgorithm> make_algorithm(const std::string& name, const AlgorithmParams& params) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  const auto it = r.by_key.find(lower(name));
  if (it == r.by_key.end()) throw UnknownAlgorithm("unknown algorithm '" + name + "'");
  return it->second.second(params);
}

std::vector<std::string> algorithm_names() {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  std::vector<std::string> out;
  for (const auto& [key, entry] : r.by_key) out.push_back(entry.first);
  return out;
}

SimReport run(const InstanceStream& inst, OnlineAlgorithm& alg, SimMode mode, const Caps& caps) {
  if (mode == SimMode::PerItem && inst.total_items() > BigInt(static_cast<unsigned long>(caps.per_item))) {
    throw CapExceeded("per-item simulation of " + inst.total_items().get_str() +
                      " items exceeds the cap " + std::to_string(caps.per_item));
  }
  if (mode == SimMode::Counted && !alg.supports_counted() &&
      inst.total_items() > BigInt(static_cast<unsigned long>(caps.per_item))) {
    throw CapExceeded(alg.name() + " has no counted mode and the stream exceeds the per-item cap");
  }
  SimReport rep;
  rep.alg = alg.name();
  rep.M = BigInt(static_cast<unsigned long>(alg.declared_m()));
  const auto check_space = [&] {
    ++rep.space_checks;
    if (alg.open_bins() > alg.declared_m()) {
      throw BoundedSpaceViolation(alg.name() + " holds " + std::to_string(alg.open_bins()) +
                                  " open bins, declared M = " + std::to_string(alg.declared_m()));
    }
  };
  for (const auto& seg : inst.segments) {
    SegmentResult sr{seg.k, 0};
    if (mode == SimMode::Counted) {
      sr.bins_opened = alg.on_segment(seg.k, seg.count);
      check_space();
    } else {
      const unsigned long n = seg.count.get_ui();
      for (unsigned long i = 0; i < n; ++i) {
        if (alg.on_item(seg.k)) ++sr.bins_opened;
        check_space();
      }
    }
    rep.per_segment.push_back(std::move(sr));
  }
  rep.total_bins = alg.total_bins();
  rep.offline_bound = offline_bound(inst).bin_count;
  rep.universal_lb = universal_lower_bound(inst);
  rep.ratio = Rat(rep.total_bins, rep.offline_bound);
  rep.bins_validated = alg.bins_validated();
  rep.geometry_failures = alg.geometry_failures();
  return rep;
}

SimReport run(const InstanceStream& inst, const std::string& alg, SimMode mode, bool materialize,
              const Caps& caps) {
  if (inst.M > BigInt(1'000'000L)) throw InvalidArgument("M too large to simulate");
  AlgorithmParams params{inst.d, inst.eps, static_cast<std::size_t>(inst.M.get_ui()), materialize};
  auto a = make_algorithm(alg, params);
  return run(inst, *a, mode, caps);
}

RatioCheck ratio_check(const SimReport& report, const Rat& weight) {
  RatioCheck c;
  c.weight = weight;
  const Rat half = weight / Rat(2);
  c.at_least_half_weight = report.ratio >= half;
  c.equals_weight = report.ratio == weight;
  c.universal_at_least_half = Rat(report.universal_lb, report.offline_bound) >= half;
  return c;
}

RatioCheck ratio_check(const SimReport& report, const EpsilonPacking& p) {
  return ratio_check(report, weight(p).value);
}

}  // namespace cubeadv
