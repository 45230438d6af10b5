#include <gtest/gtest.h>

#include "cubeadv/errors.hpp"
#include "cubeadv/simulator.hpp"
#include "oracles.hpp"

using namespace cubeadv;

namespace {

Rat q(long p, long d) { return Rat(BigInt(p), BigInt(d)); }

EpsilonPacking warmup(int d, PackingMode mode = PackingMode::Counted) {
  return assemble(warmup_family(d), Rat(BigInt(1), BigInt(d) * d), mode);
}

// Opens a fresh bin for every item and never closes any: violates M.
class Hoarder final : public OnlineAlgorithm {
public:
  explicit Hoarder(std::size_t m) : m_(m) {}
  std::string name() const override { return "Hoarder"; }
  std::size_t declared_m() const override { return m_; }
  bool on_item(int) override {
    ++open_;
    return true;
  }
  std::size_t open_bins() const override { return open_; }
  BigInt total_bins() const override { return BigInt(static_cast<unsigned long>(open_)); }

private:
  std::size_t m_;
  std::size_t open_ = 0;
};

// Bin counting by a plain per-item loop: one open bin per class, LRU order,
// a bin closes the moment it is full.
BigInt reference_bins(const InstanceStream& inst, std::size_t M) {
  struct Open {
    int k;
    mpz_class free;
  };
  std::vector<Open> open;  // front is least recently used
  mpz_class bins = 0;
  for (const auto& s : inst.segments) {
    const mpz_class cap = oracle::ipow(s.k - 1, static_cast<unsigned long>(inst.d));
    for (mpz_class i = 0; i < s.count; ++i) {
      auto it = std::find_if(open.begin(), open.end(), [&](const Open& o) { return o.k == s.k; });
      Open o{s.k, cap};
      if (it != open.end()) {
        o = *it;
        open.erase(it);
      } else {
        if (open.size() >= M) open.erase(open.begin());
        bins += 1;
      }
      o.free -= 1;
      if (o.free > 0) open.push_back(o);
    }
  }
  return bins;
}

}  // namespace

TEST(Simulator, WarmupThreeFull) {
  const auto p = warmup(3);
  const auto inst = build_instance(p, 2, Scale::Full());
  const SimReport r = run(inst, "ClassNextFit", SimMode::Counted);
  EXPECT_EQ(r.total_bins, 48);
  ASSERT_EQ(r.per_segment.size(), 2u);
  EXPECT_EQ(r.per_segment[0].bins_opened, 32);
  EXPECT_EQ(r.per_segment[1].bins_opened, 16);
  EXPECT_EQ(r.offline_bound, 32);
  EXPECT_EQ(r.universal_lb, 44);
  EXPECT_EQ(r.ratio, q(3, 2));
  const RatioCheck c = ratio_check(r, p);
  EXPECT_TRUE(c.at_least_half_weight);
  EXPECT_TRUE(c.equals_weight);
  EXPECT_TRUE(c.universal_at_least_half);  // 44/32 = 11/8 >= 3/4
}

TEST(Simulator, SmallestInstance) {
  EpsilonPacking p;
  p.d = 2;
  p.eps = q(1, 4);
  p.mode = PackingMode::Counted;
  p.nu[2] = {BigInt(1), CountKind::Exact};
  const auto r = run(build_instance(p, 1, Scale::Full()), "ClassNextFit", SimMode::Counted);
  EXPECT_EQ(r.total_bins, 2);
  EXPECT_EQ(r.ratio, Rat(1));
  EXPECT_TRUE(ratio_check(r, p).at_least_half_weight);
}

TEST(Simulator, WarmupFourMThree) {
  const auto p = warmup(4);
  const auto inst = build_instance(p, 3, Scale::Full());
  EXPECT_EQ(inst.multiplier, 1296);
  const auto r = run(inst, "ClassNextFit", SimMode::Counted);
  EXPECT_EQ(r.total_bins, 14256);
  EXPECT_EQ(r.ratio, q(11, 6));
}

TEST(Simulator, SegmentArithmeticIsStateful) {
  ClassNextFit alg({3, q(1, 9), 1, false});
  EXPECT_EQ(alg.on_segment(3, 128), 16);
  EXPECT_EQ(alg.open_bins(), 0u);  // full bins close at once
  ClassNextFit fresh({3, q(1, 9), 1, false});
  EXPECT_EQ(fresh.on_segment(3, 5), 1);
  EXPECT_EQ(fresh.on_segment(3, 3), 0);
  EXPECT_EQ(fresh.on_segment(3, 1), 1);
  ClassNextFit unit({4, q(1, 16), 2, false});
  EXPECT_EQ(unit.on_segment(2, 37), 37);
}

TEST(Simulator, CountedMatchesPerItem) {
  for (int d = 2; d <= 5; ++d) {
    const auto p = warmup(d);
    for (long M = 1; M <= 3; ++M) {
      for (const Scale& s : {Scale::Full(), Scale::Reduced(1), Scale::Reduced(2)}) {
        const auto inst = build_instance(p, M, s);
        if (inst.total_items() > 100'000) continue;
        const auto a = run(inst, "ClassNextFit", SimMode::Counted);
        const auto b = run(inst, "ClassNextFit", SimMode::PerItem);
        EXPECT_EQ(a, b) << "d=" << d << " M=" << M << " " << s.to_string();
        EXPECT_GT(b.space_checks, 0u);
        EXPECT_EQ(a.total_bins, reference_bins(inst, static_cast<std::size_t>(M)));
      }
    }
  }
}

// Interleaved classes with M smaller than the class count exercise eviction.
TEST(Simulator, EvictionMatchesReference) {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    InstanceStream inst;
    inst.d = 2;
    inst.eps = q(1, 25);
    inst.M = rng.between(1, 3);
    int k = 1;
    const int n = rng.between(1, 4);
    for (int i = 0; i < n && k < 5; ++i) {
      k = rng.between(k + 1, 5);
      inst.segments.push_back({k, BigInt(rng.between(1, 40))});
    }
    const auto a = run(inst, "ClassNextFit", SimMode::Counted);
    const auto b = run(inst, "ClassNextFit", SimMode::PerItem);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.total_bins, reference_bins(inst, inst.M.get_ui()));
  }
}

TEST(Simulator, MaterializedBinsAreValidPackings) {
  for (int d = 2; d <= 4; ++d) {
    const auto inst = build_instance(warmup(d), 1, Scale::Reduced(1));
    if (inst.total_items() > 20'000) continue;
    const auto r = run(inst, "ClassNextFit", SimMode::PerItem, true);
    EXPECT_GT(r.bins_validated, 0u);
    EXPECT_EQ(r.geometry_failures, 0u) << "d=" << d;
  }
}

TEST(Simulator, ExactReproductionOnFullScale) {
  for (int d = 2; d <= 6; ++d) {
    const auto p = warmup(d);
    for (long M = 1; M <= 3; ++M) {
      const auto inst = build_instance(p, M, Scale::Full());
      const auto r = run(inst, "ClassNextFit", SimMode::Counted);
      EXPECT_EQ(Rat(r.total_bins), Rat(BigInt(BigInt(2) * M * inst.multiplier)) * weight(p).value);
      EXPECT_EQ(r.ratio, weight(p).value);
    }
  }
}

TEST(Simulator, DoublingReducedScale) {
  const auto p = warmup(4);
  for (long t = 1; t <= 8; t *= 2) {
    const auto a = run(build_instance(p, 2, Scale::Reduced(t)), "ClassNextFit", SimMode::Counted);
    const auto b = run(build_instance(p, 2, Scale::Reduced(2 * t)), "ClassNextFit", SimMode::Counted);
    EXPECT_EQ(b.total_bins, 2 * a.total_bins);
    EXPECT_EQ(b.offline_bound, 2 * a.offline_bound);
    EXPECT_EQ(b.ratio, a.ratio);
  }
}

TEST(Simulator, UnknownAlgorithmAndCaps) {
  const auto inst = build_instance(warmup(3), 1, Scale::Full());
  EXPECT_THROW(run(inst, "FirstFit", SimMode::Counted), UnknownAlgorithm);
  EXPECT_NO_THROW(run(inst, "classnextfit", SimMode::Counted));
  Caps tiny;
  tiny.per_item = 10;
  EXPECT_THROW(run(inst, "ClassNextFit", SimMode::PerItem, false, tiny), CapExceeded);
}

TEST(Simulator, SpaceViolationIsCaught) {
  const auto inst = build_instance(warmup(3), 1, Scale::Reduced(1));
  Hoarder bad(1);
  EXPECT_THROW(run(inst, bad, SimMode::PerItem), BoundedSpaceViolation);
}

TEST(Simulator, PluginRegistration) {
  register_algorithm("Hoarder", [](const AlgorithmParams& p) { return std::make_unique<Hoarder>(p.M); });
  const auto names = algorithm_names();
  EXPECT_NE(std::find(names.begin(), names.end(), "Hoarder"), names.end());
  const auto inst = build_instance(warmup(2), 1, Scale::Full());
  // Two class-2 items with M = 1 overflow a hoarding algorithm.
  EXPECT_THROW(run(inst, "Hoarder", SimMode::PerItem), BoundedSpaceViolation);
}
