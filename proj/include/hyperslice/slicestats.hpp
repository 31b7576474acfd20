#pragma once

// Statistics of Z = #(phi^{-1} H) for H uniform on the dual projective space.
//
// Two independent routes are provided and must agree exactly:
//  * enumeration (exact_stats): every hyperplane is visited and Z computed
//    directly, by incidence for a set map or by counting slice(X, phi, H)
//    for a morphism;
//  * closed form (predicted_stats): mu = |X| p1 and
//    sigma^2 = D (p1 - p1^2) + (|X|^2 - D)(p2 - p1^2), where D is the sum of
//    squared fiber sizes.
//
// Monte Carlo estimates use the unbiased (N-1) sample variance.

#include <hyperslice/error.hpp>
#include <hyperslice/field.hpp>
#include <hyperslice/parallel.hpp>
#include <hyperslice/projective.hpp>
#include <hyperslice/rational.hpp>
#include <hyperslice/rng.hpp>
#include <hyperslice/variety.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace hyperslice {

/// A map of sets X -> P^n(F_q): one image point per domain element.
struct SetMap {
  FieldPtr field;
  unsigned n = 1;
  std::vector<ProjPoint> images;
};

struct SliceStats {
  ExactRational mean;
  ExactRational variance;
  /// Sum of squared fiber sizes.
  std::uint64_t collision_sum = 0;
  std::uint64_t max_fiber = 0;
  std::uint64_t image_size = 0;
  std::uint64_t domain_size = 0;
  /// Hyperplanes the moments were taken over (0 for closed forms).
  std::uint64_t hyperplanes = 0;
};

namespace detail {

struct Moments {
  BigInt sum = 0;
  BigInt sum_sq = 0;
};

inline Moments merge(const std::vector<Moments>& parts) {
  Moments m;
  for (const auto& p : parts) {
    m.sum += p.sum;
    m.sum_sq += p.sum_sq;
  }
  return m;
}

/// Population mean and variance over `count` equally likely values.
inline void population(const Moments& m, std::uint64_t count, SliceStats& out) {
  out.mean = ExactRational(m.sum, BigInt(count));
  out.variance = ExactRational(m.sum_sq, BigInt(count)) - out.mean * out.mean;
  out.hyperplanes = count;
}

inline void fill_fiber_data(const SetMap& map, SliceStats& out) {
  std::map<std::vector<Elem>, std::uint64_t> fibers;
  for (const auto& y : map.images) ++fibers[y.coords];
  out.domain_size = map.images.size();
  out.image_size = fibers.size();
  for (const auto& [y, f] : fibers) {
    out.collision_sum += f * f;
    out.max_fiber = std::max(out.max_fiber, f);
  }
}

inline void check_set_map(const SetMap& map) {
  if (!map.field) throw Error(ErrorCode::FieldMismatch, "set map without a field");
  for (const auto& y : map.images) {
    if (y.coords.size() != map.n + 1) throw Error(ErrorCode::DimensionMismatch, "image point of the wrong dimension");
    for (auto c : y.coords)
      if (!map.field->contains(c)) throw Error(ErrorCode::FieldMismatch, "image coordinate outside the field");
    auto norm = normalize(*map.field, y.coords);
    if (!norm || *norm != y.coords) throw Error(ErrorCode::InvalidScenario, "image point is not normalized");
  }
}

}  // namespace detail

/// Moments of Z over all hyperplanes, each Z computed by brute-force incidence.
inline SliceStats exact_stats(const SetMap& map, unsigned workers = 1, std::uint64_t budget = kDefaultBudget) {
  detail::check_set_map(map);
  const Field& k = *map.field;
  ProjectiveSpace dual(map.field, map.n);
  check_budget(dual.size() * std::max<std::uint64_t>(map.images.size(), 1), budget, "exhaustive slice statistics");
  auto parts = parallel_ranges(dual.size(), workers, [&](std::uint64_t begin, std::uint64_t end) {
    detail::Moments m;
    std::vector<Elem> H(map.n + 1);
    for (std::uint64_t h = begin; h < end; ++h) {
      dual.unrank(h, H);
      std::uint64_t z = 0;
      for (const auto& y : map.images) z += dot(k, y.coords, H).v == 0;
      m.sum += z;
      m.sum_sq += BigInt(z) * z;
    }
    return m;
  });
  SliceStats out;
  detail::population(detail::merge(parts), dual.size(), out);
  detail::fill_fiber_data(map, out);
  return out;
}

/// Moments of Z over all hyperplanes, each Z = #slice(X, phi, H)(F_q) counted
/// by enumeration.  This is the oracle for closed_form_stats.
inline SliceStats exact_stats(const ConstructibleSet& X, const MorphismToPn& phi, const CountOptions& opts = {}) {
  phi.validate(X);
  ProjectiveSpace dual(X.field, phi.n);
  const std::uint64_t per_slice = enumeration_size(X.ambient, X.field->order());
  check_budget(dual.size() * per_slice, opts.budget, "exhaustive slice statistics");
  CountOptions inner = opts;
  inner.workers = 1;
  auto parts = parallel_ranges(dual.size(), opts.workers, [&](std::uint64_t begin, std::uint64_t end) {
    detail::Moments m;
    for (std::uint64_t h = begin; h < end; ++h) {
      const Hyperplane H{dual.at(h)};
      const std::uint64_t z = count_points(slice(X, phi, H), inner).count;
      m.sum += z;
      m.sum_sq += BigInt(z) * z;
    }
    return m;
  });
  SliceStats out;
  detail::population(detail::merge(parts), dual.size(), out);
  const auto prof = fiber_profile(X, phi, opts);
  out.domain_size = prof.domain_size;
  out.image_size = prof.image_size;
  out.max_fiber = prof.max_fiber;
  out.collision_sum = prof.collision_sum;
  return out;
}

struct PredictedStats {
  ExactRational mean;
  ExactRational variance;
};

/// Closed forms for the mean and variance of Z from |X| and D.
inline PredictedStats predicted_stats(std::uint64_t domain_size, std::uint64_t collision_sum, std::uint64_t q, unsigned n) {
  const BigInt x = domain_size;
  const BigInt d = collision_sum;
  if (d > x * x)
    throw Error(ErrorCode::InconsistentD, "D = " + d.str() + " exceeds |X|^2 = " + BigInt(x * x).str());
  const ExactRational a = p1(q, n), b = p2(q, n);
  PredictedStats s;
  s.mean = ExactRational(x) * a;
  s.variance = ExactRational(d) * (a - a * a) + ExactRational(x * x - d) * (b - a * a);
  return s;
}

/// Fiber profile once, then closed forms.
inline SliceStats closed_form_stats(const ConstructibleSet& X, const MorphismToPn& phi, const CountOptions& opts = {}) {
  phi.validate(X);
  const auto prof = fiber_profile(X, phi, opts);
  const auto pred = predicted_stats(prof.domain_size, prof.collision_sum, X.field->order(), phi.n);
  SliceStats out;
  out.mean = pred.mean;
  out.variance = pred.variance;
  out.domain_size = prof.domain_size;
  out.image_size = prof.image_size;
  out.max_fiber = prof.max_fiber;
  out.collision_sum = prof.collision_sum;
  return out;
}

struct VarianceBound {
  /// #phi(X) * s^2 * p1.
  ExactRational coarse;
  /// D * p1, never larger than coarse.
  ExactRational sharp;
};

inline VarianceBound variance_bound(std::uint64_t image_size, std::uint64_t max_fiber, std::uint64_t collision_sum,
                                    std::uint64_t q, unsigned n) {
  const ExactRational a = p1(q, n);
  return {ExactRational(BigInt(image_size) * max_fiber * max_fiber) * a, ExactRational(BigInt(collision_sum)) * a};
}

/// Chebyshev: Prob(|Z - mu| >= t sigma) <= 1/t^2.
inline ExactRational chebyshev_tail(const ExactRational& t) {
  if (t <= 0) throw Error(ErrorCode::NonpositiveT, "t must be positive, got " + to_string(t));
  return 1 / (t * t);
}

/// The bound 1/t^2 with t chosen so that q^{r-1}/2 = t sigma, i.e. 4 sigma^2 / q^{2r-2}.
inline ExactRational chebyshev_very_bad_bound(const ExactRational& variance, std::uint64_t q, unsigned r) {
  if (r < 1) throw Error(ErrorCode::DimensionTooSmall, "dimension r must be >= 1");
  return 4 * variance / ExactRational(ipow(q, 2 * r - 2));
}

struct McStats {
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  /// Sample mean and unbiased sample variance, exact.
  ExactRational mean;
  ExactRational variance;
  /// Standard error of the mean, sqrt(variance / samples).
  double se_mean = 0;
  /// Normal-approximation standard error of the variance, variance * sqrt(2 / (samples - 1)).
  double se_variance = 0;
};

/// Sample i draws its hyperplane from CounterRng(seed, i), so results depend
/// only on (seed, samples), never on the number of workers.
inline McStats mc_stats(const SetMap& map, std::uint64_t samples, std::uint64_t seed, unsigned workers = 1) {
  detail::check_set_map(map);
  if (samples < 2) throw Error(ErrorCode::InvalidScenario, "Monte Carlo needs at least 2 samples");
  const Field& k = *map.field;
  std::map<std::vector<Elem>, std::uint64_t> hist;
  for (const auto& y : map.images) ++hist[y.coords];
  std::vector<std::pair<std::vector<Elem>, std::uint64_t>> fibers(hist.begin(), hist.end());
  auto parts = parallel_ranges(samples, workers, [&](std::uint64_t begin, std::uint64_t end) {
    detail::Moments m;
    for (std::uint64_t i = begin; i < end; ++i) {
      CounterRng rng(seed, i);
      const Hyperplane H = sample_hyperplane(k, map.n, rng);
      std::uint64_t z = 0;
      for (const auto& [y, f] : fibers)
        if (dot(k, y, H.coords).v == 0) z += f;
      m.sum += z;
      m.sum_sq += BigInt(z) * z;
    }
    return m;
  });
  const auto m = detail::merge(parts);
  McStats out;
  out.samples = samples;
  out.seed = seed;
  const BigInt N = samples;
  out.mean = ExactRational(m.sum, N);
  out.variance = ExactRational(N * m.sum_sq - m.sum * m.sum, N * (N - 1));
  const double v = to_double(out.variance);
  out.se_mean = std::sqrt(v / double(samples));
  out.se_variance = v * std::sqrt(2.0 / double(samples - 1));
  return out;
}

/// The set map x -> phi(x) on X(F_q), domain elements grouped by image point.
inline SetMap to_set_map(const ConstructibleSet& X, const MorphismToPn& phi, const CountOptions& opts = {}) {
  const auto prof = fiber_profile(X, phi, opts);
  ProjectiveSpace target(X.field, phi.n);
  SetMap map{X.field, phi.n, {}};
  map.images.reserve(prof.domain_size);
  for (const auto& [idx, f] : prof.fibers) {
    const ProjPoint y{target.at(idx)};
    for (std::uint64_t i = 0; i < f; ++i) map.images.push_back(y);
  }
  return map;
}

inline McStats mc_stats(const ConstructibleSet& X, const MorphismToPn& phi, std::uint64_t samples, std::uint64_t seed,
                        const CountOptions& opts = {}) {
  phi.validate(X);
  return mc_stats(to_set_map(X, phi, opts), samples, seed, opts.workers);
}

}  // namespace hyperslice
