#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "cubeadv/codes.hpp"
#include "cubeadv/errors.hpp"
#include "oracles.hpp"

using namespace cubeadv;

namespace {

Code explicit_code(int k, int d, std::vector<Letters> words) {
  Code c;
  c.k = k;
  c.d = d;
  std::sort(words.begin(), words.end());
  c.size = {CountKind::Exact, BigInt(static_cast<unsigned long>(words.size()))};
  c.repr = std::move(words);
  return c;
}

}  // namespace

TEST(Codes, SOfExamples) {
  EXPECT_EQ(S_of(100), 5);
  EXPECT_EQ(S_of(1000), 33);
  EXPECT_EQ(S_of(8), 2);
  EXPECT_EQ(S_of(2), 2);
  EXPECT_THROW(S_of(1), InvalidArgument);
}

TEST(Codes, FFamilySmallAndReproducible) {
  const FFamily one = gen_F_family(4, 2, 9, 10);
  ASSERT_EQ(one.sets.size(), 1u);
  EXPECT_EQ(one.sets[0].size(), 2u);

  const FFamily a = gen_F_family(1000, 33, 42, 1000);
  const FFamily b = gen_F_family(1000, 33, 42, 1000);
  EXPECT_EQ(a.sets, b.sets);
  EXPECT_EQ(a.attempts, b.attempts);
  ASSERT_EQ(a.sets.size(), 32u);
  int worst = 0;
  for (std::size_t i = 0; i < a.sets.size(); ++i) {
    EXPECT_EQ(a.sets[i].size(), 500u);
    EXPECT_TRUE(std::is_sorted(a.sets[i].begin(), a.sets[i].end()));
    for (std::size_t j = i + 1; j < a.sets.size(); ++j) {
      std::vector<int> both;
      std::set_intersection(a.sets[i].begin(), a.sets[i].end(), a.sets[j].begin(), a.sets[j].end(),
                            std::back_inserter(both));
      EXPECT_LT(26 * static_cast<int>(both.size()), 7000);
      worst = std::max(worst, static_cast<int>(both.size()));
    }
  }
  EXPECT_EQ(worst, a.max_intersection);
}

TEST(Codes, FFamilySmallDimensionMayGiveUp) {
  // d=26 with 12 half-size sets: success or RetriesExhausted are both legitimate.
  try {
    const FFamily f = gen_F_family(26, 13, 1, 50);
    EXPECT_LT(26 * f.max_intersection, 7 * 26);
  } catch (const RetriesExhausted& e) {
    EXPECT_NE(std::string(e.what()).find("worst pair F_"), std::string::npos);
  }
}

TEST(Codes, WarmupExamples) {
  const CodeFamily two = warmup_family(2);
  ASSERT_EQ(two.codes.size(), 1u);
  ASSERT_TRUE(two.code(2).is_explicit());
  EXPECT_EQ(two.code(2).words(), (std::vector<Letters>{{1, 2}}));

  const CodeFamily three = warmup_family(3);
  EXPECT_EQ(three.code(2).words().size(), 1u);
  EXPECT_EQ(three.code(3).words().size(), 4u);
}

// |L_k| = (k-1)^(d-1), and each warm-up word is exactly "k at coordinate k, below k elsewhere".
TEST(Codes, WarmupSizesByEnumeration) {
  for (int d = 2; d <= 9; ++d) {
    const CodeFamily fam = warmup_family(d);
    ASSERT_EQ(fam.S, d);
    for (int k = 2; k <= d; ++k) {
      const Code& c = fam.code(k);
      EXPECT_EQ(c.size.count, oracle::ipow(k - 1, static_cast<unsigned long>(d - 1))) << d << " " << k;
      EXPECT_EQ(c.size.kind, CountKind::Exact);
      if (d <= 6) {
        std::uint64_t n = 0;
        oracle::for_each_word(d, 1, k, [&](const std::vector<int>& w) {
          bool in = w[static_cast<std::size_t>(k - 1)] == k;
          for (int i = 0; i < d && in; ++i) in = i == k - 1 || w[static_cast<std::size_t>(i)] < k;
          EXPECT_EQ(c.contains(w), in);
          n += in;
        });
        EXPECT_EQ(BigInt(static_cast<unsigned long>(n)), c.size.count);
      }
    }
  }
}

TEST(Codes, GappedExamples) {
  const CodeFamily three = warmup_family(3);
  EXPECT_TRUE(is_gapped(three.code(3)));
  EXPECT_FALSE(is_gapped(explicit_code(2, 2, {{2, 1}, {1, 2}})));
  EXPECT_TRUE(is_gapped(explicit_code(2, 2, {{1, 2}})));
}

TEST(Codes, SeparationExamples) {
  const CodeFamily three = warmup_family(3);
  const auto r = are_separated(three.code(2), three.code(3), 0);
  EXPECT_TRUE(r.separated);
  EXPECT_EQ(r.method, CheckMethod::Exhaustive);

  EXPECT_TRUE(are_separated(explicit_code(2, 2, {{1, 2}}), explicit_code(3, 2, {{3, 1}}), 0).separated);
  EXPECT_TRUE(are_separated(explicit_code(2, 2, {{2, 1}}), explicit_code(3, 2, {{1, 3}}), 0).separated);
  const auto bad = are_separated(explicit_code(2, 2, {{2, 1}}), explicit_code(3, 2, {{3, 2}}), 0);
  EXPECT_FALSE(bad.separated);
  ASSERT_TRUE(bad.witness.has_value());
  EXPECT_EQ(bad.witness->first, (Letters{2, 1}));
  EXPECT_EQ(bad.witness->second, (Letters{3, 2}));
  EXPECT_THROW(are_separated(three.code(3), three.code(2), 0), InvalidArgument);
}

TEST(Codes, CountGoodFixedCases) {
  // k=2 has no bad events.
  EXPECT_EQ(count_good_exact(2, {0, 1, 2}, {}), 1);
  // k=3, |F|=6, one J of size 3.
  EXPECT_EQ(count_good_exact(3, {0, 1, 2, 3, 4, 5}, {{2, {0, 1, 2}}}), 56);
  // k=4, |F|=4, J(2,4)={1,2}, J(3,4)={2,3} (1-based).
  EXPECT_EQ(count_good_exact(4, {0, 1, 2, 3}, {{2, {0, 1}}, {3, {1, 2}}}), 33);
  EXPECT_EQ(oracle::brute_good(4, 4, {{0, 1}, {1, 2}}), 33u);
  EXPECT_EQ(oracle::brute_good(3, 6, {{0, 1, 2}}), 56u);
  EXPECT_THROW(count_good_exact(3, {0, 1}, {{2, {5}}}), InvalidArgument);
}

TEST(Codes, CountGoodMatchesBruteForceOnRandomConfigs) {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = rng.between(2, 5);
    const int f = rng.between(0, 10);
    IndexSet F;
    for (int i = 0; i < f; ++i) F.push_back(2 * i + rng.between(0, 1));  // sparse positions in [0, 2f)
    JMap J;
    std::vector<std::vector<int>> local;
    for (int l = 2; l < k && f > 0; ++l) {
      IndexSet js;
      std::vector<int> e;
      for (int p = 0; p < f; ++p) {
        if (rng.below(2) == 0) {
          js.push_back(F[static_cast<std::size_t>(p)]);
          e.push_back(p);
        }
      }
      J[l] = js;
      local.push_back(e);
    }
    const auto expect = oracle::brute_good(k, f, local);
    ASSERT_EQ(count_good_exact(k, F, J), BigInt(static_cast<unsigned long>(expect)))
        << "trial " << trial << " k=" << k << " f=" << f;
  }
}

TEST(Codes, BoundExamplesAndSoundness) {
  EXPECT_EQ(bound_good_fraction(2, {}), Rat(1));
  EXPECT_EQ(bound_good_fraction(3, {{2, {0, 1, 2}}}), Rat(BigInt(7), BigInt(8)));

  JMap wide;
  for (int l = 2; l < 33; ++l) {
    IndexSet js(231);
    for (int i = 0; i < 231; ++i) js[static_cast<std::size_t>(i)] = i;
    wide[l] = js;
  }
  EXPECT_GE(bound_good_fraction(33, wide), Rat(BigInt(10), BigInt(11)));

  // The union bound never exceeds the exact fraction.
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = rng.between(3, 5);
    const int f = rng.between(1, 9);
    IndexSet F(static_cast<std::size_t>(f));
    for (int i = 0; i < f; ++i) F[static_cast<std::size_t>(i)] = i;
    JMap J;
    for (int l = 2; l < k; ++l) {
      IndexSet js;
      for (int i = 0; i < f; ++i) {
        if (rng.below(3) != 0) js.push_back(i);
      }
      J[l] = js;
    }
    const Rat exact(count_good_exact(k, F, J), pow(BigInt(k - 1), static_cast<unsigned long>(f)));
    EXPECT_LE(bound_good_fraction(k, J), exact);
  }
}

TEST(Codes, CountGoodCapFallsBackToBound) {
  // 25 pairwise incomparable events exceed the default cap.
  IndexSet F;
  JMap J;
  for (int i = 0; i < 50; ++i) F.push_back(i);
  for (int l = 2; l < 27; ++l) J[l] = {2 * (l - 2), 2 * (l - 2) + 1};
  EXPECT_THROW(count_good_exact(27, F, J), CapExceeded);

  // The same events as an implicit code: F_27 = F, F_l = F minus one pair.
  std::vector<IndexSet> fs;
  for (int l = 2; l <= 27; ++l) {
    IndexSet f;
    for (int i : F) {
      if (l == 27 || (i != 2 * (l - 2) && i != 2 * (l - 2) + 1)) f.push_back(i);
    }
    fs.push_back(f);
  }
  Code c = implicit_code(27, 50, fs);
  certify_size(c, Rat(BigInt(10), BigInt(11)), Caps{});
  EXPECT_EQ(c.size.kind, CountKind::LowerBound);
  EXPECT_FALSE(c.certified_threshold);

  // All F equal: every J is empty, so the code is empty and exact.
  Code empty = implicit_code(5, 8, std::vector<IndexSet>(4, IndexSet{0, 1, 2, 3}));
  certify_size(empty, Rat(BigInt(10), BigInt(11)), Caps{});
  EXPECT_EQ(empty.size.count, 0);
  EXPECT_EQ(empty.size.kind, CountKind::Exact);
  EXPECT_FALSE(empty.empty_j.empty());
}

TEST(Codes, ImplicitCountMatchesEnumeration) {
  // Small probabilistic-style families: count words of [k]^d satisfying the rule.
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = rng.between(2, 6);
    const int S = rng.between(2, 4);
    std::vector<IndexSet> F;
    for (int k = 2; k <= S; ++k) {
      IndexSet f;
      for (int i = 0; i < d; ++i) {
        if (rng.below(2) == 0) f.push_back(i);
      }
      F.push_back(f);
    }
    for (int k = 2; k <= S; ++k) {
      Code c = implicit_code(k, d, F);
      certify_size(c, Rat(BigInt(10), BigInt(11)), Caps{});
      const auto& own = F[static_cast<std::size_t>(k - 2)];
      std::uint64_t n = 0;
      oracle::for_each_word(d, 1, k, [&](const std::vector<int>& w) {
        bool in = true;
        for (int i = 0; i < d && in; ++i) {
          const bool inF = std::binary_search(own.begin(), own.end(), i);
          const int v = w[static_cast<std::size_t>(i)];
          in = inF ? v != k - 1 : v < k;
        }
        for (int l = 2; l < k && in; ++l) {
          const auto& lower = F[static_cast<std::size_t>(l - 2)];
          bool hit = false;
          for (int i : own) {
            if (!std::binary_search(lower.begin(), lower.end(), i)) hit = hit || w[static_cast<std::size_t>(i)] == k;
          }
          in = hit;
        }
        EXPECT_EQ(c.contains(w), in);
        n += in;
      });
      EXPECT_EQ(c.size.kind, CountKind::Exact);
      EXPECT_EQ(c.size.count, BigInt(static_cast<unsigned long>(n))) << "trial " << trial << " k=" << k;
    }
  }
}

TEST(Codes, SampledMembersBelongToCode) {
  const CodeFamily fam = build_separated_family(60, 3);
  Rng rng(1);
  for (const auto& c : fam.codes) {
    if (c.known_empty()) continue;
    for (int i = 0; i < 20; ++i) {
      const auto w = sample_member(c, rng);
      ASSERT_TRUE(w.has_value());
      EXPECT_TRUE(c.contains(*w));
    }
  }
}

TEST(Codes, ExplicitAndImplicitFamiliesAgree) {
  BuildOptions ex;
  ex.mode = CodeMode::Explicit;
  const CodeFamily a = build_separated_family(12, 7, ex);
  const CodeFamily b = build_separated_family(12, 7);
  ASSERT_EQ(a.F, b.F);
  for (std::size_t i = 0; i < a.codes.size(); ++i) {
    ASSERT_TRUE(a.codes[i].is_explicit());
    EXPECT_EQ(a.codes[i].size.count, b.codes[i].size.count);
    for (const auto& w : a.codes[i].words()) EXPECT_TRUE(b.codes[i].contains(w));
  }
  EXPECT_TRUE(verify_family(a).ok);
  EXPECT_TRUE(verify_family(b).ok);
}

TEST(Codes, LargeFamilyCertificates) {
  const CodeFamily fam = build_separated_family(1000, 42);
  EXPECT_EQ(fam.S, 33);
  ASSERT_EQ(fam.codes.size(), 32u);
  for (const auto& c : fam.codes) {
    EXPECT_TRUE(c.certified_threshold) << "k=" << c.k;
    EXPECT_FALSE(c.is_explicit());
    const Rat frac(c.size.count, pow(BigInt(c.k - 1), 1000));
    EXPECT_GE(frac, Rat(BigInt(10), BigInt(11)));
    // Union bound on measured J sets alone certifies 10/11.
    EXPECT_GE(bound_good_fraction(c.k, c.implicit().J), Rat(BigInt(10), BigInt(11)));
  }
  EXPECT_TRUE(verify_family(fam).ok);
}
