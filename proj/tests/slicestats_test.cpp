#include "helpers.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace hyperslice;
using namespace testing_helpers;

namespace {

std::vector<Elem> E(std::initializer_list<std::uint32_t> v) {
  std::vector<Elem> out;
  for (auto x : v) out.push_back(Elem{x});
  return out;
}

SetMap random_map(const FieldPtr& k, unsigned n, std::mt19937_64& gen) {
  const auto pts = enum_points(k, n);
  std::uniform_int_distribution<std::size_t> size(0, 30), which(0, pts.size() - 1), clumpy(0, 3);
  SetMap m{k, n, {}};
  const std::size_t N = size(gen);
  // Mix uniform draws with repeats so large fibers show up.
  for (std::size_t i = 0; i < N; ++i)
    m.images.push_back(clumpy(gen) == 0 && !m.images.empty() ? m.images[which(gen) % m.images.size()] : pts[which(gen)]);
  return m;
}

}  // namespace

TEST(ExactStats, SpecExamples) {
  auto f2 = make_field(2, 1);
  const ProjPoint y{E({1, 0, 0})};
  auto four = exact_stats(SetMap{f2, 2, {y, y, y, y}});
  EXPECT_EQ(four.mean, rational(12, 7));
  EXPECT_EQ(four.variance, rational(192, 49));
  EXPECT_EQ(four.collision_sum, 16u);
  EXPECT_EQ(four.max_fiber, 4u);
  EXPECT_EQ(four.hyperplanes, 7u);

  auto none = exact_stats(SetMap{f2, 2, {}});
  EXPECT_EQ(none.mean, 0);
  EXPECT_EQ(none.variance, 0);

  auto line = exact_stats(SetMap{f2, 2, {ProjPoint{E({1, 0, 0})}, ProjPoint{E({0, 1, 0})}, ProjPoint{E({1, 1, 0})}}});
  EXPECT_EQ(line.mean, rational(9, 7));
  EXPECT_EQ(line.variance, rational(24, 49));

  auto general = exact_stats(SetMap{f2, 2, {ProjPoint{E({1, 0, 0})}, ProjPoint{E({0, 1, 0})}, ProjPoint{E({0, 0, 1})}}});
  EXPECT_EQ(general.mean, rational(9, 7));
  EXPECT_EQ(general.variance, rational(24, 49));
}

TEST(ExactStats, GeometricLineInP2OverGF2) {
  auto f2 = make_field(2, 1);
  auto X = make_set(f2, AmbientKind::Projective, {"x", "y", "z"}, {"z"});
  auto phi = make_map(X, {"x", "y", "z"});
  auto s = exact_stats(X, phi);
  EXPECT_EQ(s.mean, rational(9, 7));
  EXPECT_EQ(s.variance, rational(24, 49));
}

TEST(ExactStats, RejectsUnnormalizedPoints) {
  auto f3 = make_field(3, 1);
  EXPECT_EQ(error_of([&] { exact_stats(SetMap{f3, 2, {ProjPoint{E({2, 0, 0})}}}); }), ErrorCode::InvalidScenario);
  EXPECT_EQ(error_of([&] { exact_stats(SetMap{f3, 2, {ProjPoint{E({1, 0})}}}); }), ErrorCode::DimensionMismatch);
}

TEST(PredictedStats, SpecExamples) {
  auto a = predicted_stats(4, 16, 2, 2);
  EXPECT_EQ(a.mean, rational(12, 7));
  EXPECT_EQ(a.variance, rational(192, 49));
  auto b = predicted_stats(0, 0, 5, 3);
  EXPECT_EQ(b.mean, 0);
  EXPECT_EQ(b.variance, 0);
  auto c = predicted_stats(3, 3, 2, 2);
  EXPECT_EQ(c.mean, rational(9, 7));
  EXPECT_EQ(c.variance, rational(24, 49));
  EXPECT_EQ(error_of([] { predicted_stats(3, 10, 2, 2); }), ErrorCode::InconsistentD);
}

TEST(PredictedStats, ExactOnRandomSetMaps) {
  std::mt19937_64 gen(4);
  for (std::uint32_t q : {2, 3, 4, 5})
    for (unsigned n = 1; n <= 3; ++n) {
      auto k = make_field_of_order(q);
      for (int i = 0; i < 200; ++i) {
        const auto m = random_map(k, n, gen);
        const auto ex = exact_stats(m);
        const auto pr = predicted_stats(ex.domain_size, ex.collision_sum, q, n);
        ASSERT_EQ(ex.mean, pr.mean);
        ASSERT_EQ(ex.variance, pr.variance);
        ASSERT_GE(ex.variance, 0);
        if (ex.domain_size) ASSERT_GE(ex.collision_sum, ex.image_size);
        const auto vb = variance_bound(ex.image_size, ex.max_fiber, ex.collision_sum, q, n);
        ASSERT_LE(ex.variance, vb.sharp);
        ASSERT_LE(vb.sharp, vb.coarse);
        if (k->is_prime_field() && i % 10 == 0) {
          std::vector<std::vector<std::int64_t>> imgs;
          for (const auto& y : m.images) {
            std::vector<std::int64_t> v;
            for (auto c : y.coords) v.push_back(c.v);
            imgs.push_back(v);
          }
          const auto [mu, var] = oracle::incidence_moments(int(q), int(n), imgs);
          ASSERT_EQ(ex.mean, mu);
          ASSERT_EQ(ex.variance, var);
        }
      }
    }
}

TEST(PredictedStats, WorkerIndependent) {
  std::mt19937_64 gen(8);
  auto k = make_field(5, 1);
  const auto m = random_map(k, 3, gen);
  const auto ref = exact_stats(m, 1);
  for (unsigned w : {2u, 8u}) {
    const auto s = exact_stats(m, w);
    EXPECT_EQ(s.mean, ref.mean);
    EXPECT_EQ(s.variance, ref.variance);
  }
}

TEST(ClosedForm, AgreesWithSliceEnumerationOnScenarios) {
  for (const char* name : {"quadric-y2x1", "blowup-chart", "quadric-surface-p3", "conic-p2", "line-pairs", "line-pairs-conjugate"}) {
    const auto s = load_scenario(scenario_path(name));
    for (std::uint64_t q : {3, 5}) {
      const auto inst = s.instantiate(q);
      const auto ex = exact_stats(inst.variety, inst.morphism);
      const auto cf = closed_form_stats(inst.variety, inst.morphism);
      EXPECT_EQ(ex.mean, cf.mean) << name << " q=" << q;
      EXPECT_EQ(ex.variance, cf.variance) << name << " q=" << q;
      const auto mapped = exact_stats(to_set_map(inst.variety, inst.morphism));
      EXPECT_EQ(mapped.variance, ex.variance) << name;
    }
  }
}

TEST(VarianceBound, SpecExamples) {
  auto vb = variance_bound(1, 4, 16, 2, 2);
  EXPECT_EQ(vb.coarse, rational(48, 7));
  EXPECT_GE(vb.coarse, rational(192, 49));
  for (std::uint64_t k : {1, 5, 30}) EXPECT_EQ(variance_bound(k, 1, k, 3, 2).coarse, ExactRational(BigInt(k)) * p1(3, 2));
}

TEST(Chebyshev, SpecExamples) {
  EXPECT_EQ(chebyshev_tail(2), rational(1, 4));
  EXPECT_EQ(chebyshev_very_bad_bound(rational(192, 49), 2, 1), rational(768, 49));
  EXPECT_EQ(error_of([] { chebyshev_tail(0); }), ErrorCode::NonpositiveT);
  EXPECT_EQ(error_of([] { chebyshev_tail(rational(-1, 2)); }), ErrorCode::NonpositiveT);
  ExactRational prev = chebyshev_tail(rational(1, 10));
  for (int i = 2; i <= 200; ++i) {
    const auto b = chebyshev_tail(rational(i, 10));
    EXPECT_LT(b, prev);
    prev = b;
  }
  EXPECT_LT(prev, rational(1, 399));
}

TEST(MeanShape, CloseToOneOverQ) {
  for (std::uint64_t q = 2; q <= 64; ++q)
    for (unsigned n = 1; n <= 4; ++n) {
      const ExactRational d = p1(q, n) - rational(1, std::int64_t(q));
      EXPECT_LE(d < 0 ? -d : d, rational(2, std::int64_t(q * q)));
    }
}

TEST(MonteCarlo, LineInP2) {
  auto f2 = make_field(2, 1);
  const SetMap line{f2, 2, {ProjPoint{E({1, 0, 0})}, ProjPoint{E({0, 1, 0})}, ProjPoint{E({1, 1, 0})}}};
  const std::uint64_t N = 10000;
  const auto mc = mc_stats(line, N, 0);
  const double sigma = std::sqrt(24.0 / 49.0);
  EXPECT_LE(std::abs(to_double(mc.mean) - 9.0 / 7.0), 5 * sigma / std::sqrt(double(N)));
  EXPECT_EQ(mc.samples, N);
  EXPECT_GT(mc.se_mean, 0);
}

TEST(MonteCarlo, DeterministicAcrossRunsAndWorkers) {
  auto k = make_field(3, 1);
  std::mt19937_64 gen(1);
  const auto m = random_map(k, 2, gen);
  const auto a = mc_stats(m, 5000, 7, 1);
  for (unsigned w : {1u, 2u, 8u}) {
    const auto b = mc_stats(m, 5000, 7, w);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.variance, b.variance);
  }
  const auto c = mc_stats(m, 5000, 8, 1);
  EXPECT_TRUE(c.mean != a.mean || c.variance != a.variance);
  EXPECT_EQ(error_of([&] { mc_stats(m, 1, 0); }), ErrorCode::InvalidScenario);
}

TEST(MonteCarlo, UnbiasedVarianceFormula) {
  // Two samples: variance is (a - b)^2 / 2.
  auto f2 = make_field(2, 1);
  const SetMap one{f2, 1, {ProjPoint{E({1, 0})}}};
  const auto mc = mc_stats(one, 2, 3);
  std::vector<int> z;
  for (std::uint64_t i = 0; i < 2; ++i) {
    CounterRng rng(3, i);
    z.push_back(incident(*f2, one.images[0], sample_hyperplane(*f2, 1, rng)) ? 1 : 0);
  }
  EXPECT_EQ(mc.variance, rational((z[0] - z[1]) * (z[0] - z[1]), 2));
}
