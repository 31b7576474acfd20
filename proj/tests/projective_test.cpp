#include <hyperslice/projective.hpp>

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace hyperslice;

namespace {

std::vector<Elem> E(std::initializer_list<std::uint32_t> v) {
  std::vector<Elem> out;
  for (auto x : v) out.push_back(Elem{x});
  return out;
}

ProjPoint P(const Field& k, std::initializer_list<std::uint32_t> v) { return make_projective<ProjPoint>(k, E(v)); }
Hyperplane H(const Field& k, std::initializer_list<std::uint32_t> v) { return make_projective<Hyperplane>(k, E(v)); }

}  // namespace

TEST(Enumerate, SpecCounts) {
  auto f2 = make_field(2, 1), f3 = make_field(3, 1);
  EXPECT_EQ(enum_points(f2, 2).size(), 7u);
  EXPECT_EQ(enum_hyperplanes(f2, 2).size(), 7u);
  EXPECT_EQ(enum_hyperplanes(f3, 3).size(), 40u);
  EXPECT_EQ(enum_points(f3, 2).size(), 13u);
}

TEST(Enumerate, DistinctNormalizedAndMatchesOracle) {
  for (std::uint32_t q : {2, 3, 4, 5, 7, 8, 9})
    for (unsigned n = 1; n <= 3; ++n) {
      auto k = make_field_of_order(q);
      auto pts = enum_points(k, n);
      ASSERT_EQ(pts.size(), (checked_pow(q, n + 1) - 1) / (q - 1));
      ASSERT_EQ(pts.size(), enum_hyperplanes(k, n).size());
      std::set<std::vector<Elem>> seen;
      for (const auto& p : pts) {
        ASSERT_EQ(normalize(*k, p.coords), p.coords);
        seen.insert(p.coords);
      }
      ASSERT_EQ(seen.size(), pts.size());
      if (k->is_prime_field()) {
        // Same order as the oracle's lexicographic listing grouped by leading position.
        auto ref = oracle::projective_points(int(q), int(n));
        std::stable_sort(ref.begin(), ref.end(), [](const auto& a, const auto& b) {
          auto lead = [](const auto& v) { return std::find_if(v.begin(), v.end(), [](auto c) { return c != 0; }) - v.begin(); };
          return lead(a) < lead(b);
        });
        for (std::size_t i = 0; i < pts.size(); ++i)
          for (unsigned j = 0; j <= n; ++j) ASSERT_EQ(std::int64_t(pts[i].coords[j].v), ref[i][j]);
      }
    }
}

TEST(Enumerate, RankUnrankAdvance) {
  for (std::uint32_t q : {2, 3, 4, 5})
    for (unsigned n = 1; n <= 4; ++n) {
      auto k = make_field_of_order(q);
      ProjectiveSpace S(k, n);
      std::vector<Elem> v = S.at(0);
      for (std::uint64_t i = 0; i < S.size(); ++i) {
        ASSERT_EQ(S.index_of(S.at(i)), i);
        ASSERT_EQ(v, S.at(i));
        S.advance(v);
      }
    }
}

TEST(Normalize, FirstNonzeroIsOne) {
  auto f5 = make_field(5, 1);
  EXPECT_EQ(normalize(*f5, E({0, 3, 1})), E({0, 1, 2}));
  EXPECT_EQ(normalize(*f5, E({0, 0, 0})), std::nullopt);
  try {
    P(*f5, {0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyInput);
  }
}

TEST(Incident, SpecExamples) {
  auto f2 = make_field(2, 1), f3 = make_field(3, 1);
  EXPECT_TRUE(incident(*f3, P(*f3, {1, 0, 0}), H(*f3, {0, 0, 1})));
  EXPECT_TRUE(incident(*f2, P(*f2, {1, 1, 0}), H(*f2, {1, 1, 0})));
  EXPECT_FALSE(incident(*f3, P(*f3, {1, 0, 0}), H(*f3, {1, 0, 0})));
  try {
    incident(*f3, P(*f3, {1, 0}), H(*f3, {1, 0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Probabilities, SpecExamples) {
  EXPECT_EQ(p1(2, 2), rational(3, 7));
  EXPECT_EQ(p2(3, 2), rational(1, 13));
  for (std::uint64_t q : {2, 3, 4, 5, 7, 8, 9, 11}) EXPECT_EQ(p2(q, 1), 0);
}

TEST(Probabilities, VarianceIdentity) {
  for (std::uint64_t q : {2, 3, 4, 5, 7, 8, 9})
    for (unsigned n = 1; n <= 5; ++n) {
      const ExactRational a = p1(q, n), b = p2(q, n);
      const BigInt top = ipow(q, n + 1) - 1;
      EXPECT_EQ(ExactRational(top * top) * (a * a - b), ExactRational(ipow(q, n - 1) * (q - 1) * (q - 1)));
      EXPECT_LT(b, a * a);
    }
}

TEST(Probabilities, EmpiricalP1AndP2) {
  for (std::uint32_t q : {2, 3, 4, 5})
    for (unsigned n = 1; n <= 3; ++n) {
      auto k = make_field_of_order(q);
      auto pts = enum_points(k, n);
      auto hs = enum_hyperplanes(k, n);
      for (const auto& y : pts) {
        std::uint64_t through = 0;
        for (const auto& h : hs) through += incident(*k, y, h);
        ASSERT_EQ(ExactRational(BigInt(through), BigInt(hs.size())), p1(q, n));
      }
      const auto& y = pts.front();
      const auto& z = pts.back();
      std::uint64_t both = 0;
      for (const auto& h : hs) both += incident(*k, y, h) && incident(*k, z, h);
      EXPECT_EQ(ExactRational(BigInt(both), BigInt(hs.size())), p2(q, n));
    }
}

TEST(Sample, GoldenValues) {
  auto f3 = make_field(3, 1);
  CounterRng rng(0, 0);
  std::vector<std::vector<Elem>> got;
  for (int i = 0; i < 4; ++i) got.push_back(sample_hyperplane(*f3, 2, rng).coords);
  const std::vector<std::vector<Elem>> golden{E({1, 1, 2}), E({1, 2, 0}), E({1, 2, 2}), E({0, 1, 1})};
  EXPECT_EQ(got, golden);
  CounterRng again(0, 0);
  EXPECT_EQ(sample_hyperplane(*f3, 2, again).coords, golden[0]);
  EXPECT_EQ(CounterRng(7, 3).at(0), CounterRng(7, 3).next());
  EXPECT_EQ(splitmix64_mix(0), 0u);
  EXPECT_EQ(CounterRng(0, 0).at(0), 4720248854425330031ull);
}

TEST(Sample, ChiSquaredUniformOnLinesOfP2F3) {
  auto f3 = make_field(3, 1);
  ProjectiveSpace dual(f3, 2);
  std::vector<std::uint64_t> hist(dual.size(), 0);
  const std::uint64_t N = 13000;
  for (std::uint64_t i = 0; i < N; ++i) {
    CounterRng rng(2024, i);
    ++hist[dual.index_of(sample_hyperplane(*f3, 2, rng).coords)];
  }
  const double expected = double(N) / double(dual.size());
  double chi2 = 0;
  for (auto c : hist) chi2 += (double(c) - expected) * (double(c) - expected) / expected;
  EXPECT_LT(chi2, 32.909);  // 0.999 quantile, 12 degrees of freedom
}

TEST(Sample, SupportOnP1OverGF2) {
  auto f2 = make_field(2, 1);
  std::set<std::vector<Elem>> seen;
  for (std::uint64_t i = 0; i < 200; ++i) {
    CounterRng rng(1, i);
    auto h = sample_hyperplane(*f2, 1, rng);
    ASSERT_EQ(normalize(*f2, h.coords), h.coords);
    seen.insert(h.coords);
  }
  EXPECT_EQ(seen.size(), 3u);
}

TEST(Span, SpecExamples) {
  auto f3 = make_field(3, 1);
  const std::vector<ProjPoint> two{P(*f3, {1, 2, 0, 1}), P(*f3, {0, 1, 1, 1})};
  EXPECT_EQ(span_dim(*f3, two), 1);
  EXPECT_EQ(span_locus_dim(*f3, two), 1);

  const std::vector<ProjPoint> axes{P(*f3, {1, 0, 0, 0}), P(*f3, {0, 1, 0, 0})};
  EXPECT_EQ(span_locus_dim(*f3, axes), 1);
  int containing = 0;
  for (const auto& h : enum_hyperplanes(f3, 3)) containing += incident(*f3, axes[0], h) && incident(*f3, axes[1], h);
  EXPECT_EQ(containing, 4);

  const std::vector<ProjPoint> frame{P(*f3, {1, 0, 0, 0}), P(*f3, {0, 1, 0, 0}), P(*f3, {0, 0, 1, 0}),
                                     P(*f3, {0, 0, 0, 1}), P(*f3, {1, 1, 1, 1})};
  EXPECT_EQ(span_locus_dim(*f3, frame), -1);
  EXPECT_EQ(span_dim(*f3, frame), 3);

  try {
    span_dim(*f3, std::vector<ProjPoint>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyInput);
  }
}

TEST(Span, LocusBoundAndEnumerationOnRandomSetsInP3F3) {
  auto f3 = make_field(3, 1);
  const auto pts = enum_points(f3, 3);
  const auto hs = enum_hyperplanes(f3, 3);
  std::mt19937_64 gen(99);
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1), howmany(1, 6);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<ProjPoint> Y;
    for (std::size_t i = howmany(gen); i > 0; --i) Y.push_back(pts[pick(gen)]);
    const int sd = span_dim(*f3, Y), ld = span_locus_dim(*f3, Y);
    EXPECT_LE(ld, (3 - sd) - 1);
    EXPECT_EQ(ld, (3 - sd) - 1);
    std::uint64_t containing = 0;
    for (const auto& h : hs) {
      bool all = true;
      for (const auto& y : Y) all &= incident(*f3, y, h);
      containing += all;
    }
    const std::uint64_t want = ld < 0 ? 0 : (checked_pow(3, ld + 1) - 1) / 2;
    ASSERT_EQ(containing, want);
  }
}

TEST(Rank, SmallMatrices) {
  auto f5 = make_field(5, 1);
  EXPECT_EQ(rank(*f5, {}), 0u);
  EXPECT_EQ(rank(*f5, {E({1, 2, 3}), E({2, 4, 0})}), 2u);
  EXPECT_EQ(rank(*f5, {E({1, 2, 3}), E({2, 4, 1})}), 1u);
  EXPECT_EQ(rank(*f5, {E({1, 2, 3}), E({2, 4, 6}), E({3, 1, 0})}), 2u);
  EXPECT_EQ(rank(*f5, {E({0, 0}), E({0, 0})}), 0u);
}
