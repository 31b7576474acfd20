#pragma once

// Component counting from point counts, the very-bad-hyperplane classifier,
// and the census of very bad hyperplanes across several q.
//
// A hyperplane H is very bad when the number of F_q-irreducible components
// of phi^{-1}H that are geometrically irreducible is not 1.  With r = dim X,
// such slices have either far fewer or about twice as many F_q-points as
// q^{r-1}; the threshold classifier flags |N1 - q^{r-1}| >= q^{r-1}/2.  The
// empty slice is very bad; a slice equal to X (phi(X) inside H) is set aside
// as EqualsX and counted with the good ones.

#include <hyperslice/error.hpp>
#include <hyperslice/field.hpp>
#include <hyperslice/parallel.hpp>
#include <hyperslice/projective.hpp>
#include <hyperslice/rational.hpp>
#include <hyperslice/slicestats.hpp>
#include <hyperslice/variety.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hyperslice {

/// GF(q^m) for m = 1..M over one base field, each with a seed-0 modulus.
inline std::vector<ExtensionField> extension_ladder(const FieldPtr& base, std::uint32_t M) {
  if (M < 1) throw Error(ErrorCode::DegreeZero, "extension depth M must be >= 1");
  std::vector<ExtensionField> out;
  out.reserve(M);
  for (std::uint32_t m = 1; m <= M; ++m) out.push_back(extend(base, m, 0));
  return out;
}

/// round(a / b) with halves rounded up, b > 0.
inline BigInt round_div(const BigInt& a, const BigInt& b) { return (2 * a + b) / (2 * b); }

struct ComponentEstimate {
  std::uint64_t q = 0;
  /// N_1..N_M.
  std::vector<std::uint64_t> counts;
  /// Dimension used; nullopt when every count is zero (Empty).
  std::optional<unsigned> dimension;
  bool dimension_declared = false;
  /// round(N_1 / q^r): number of geometrically irreducible F_q-components of top dimension.
  std::uint64_t components = 0;

  bool empty() const noexcept { return !dimension.has_value(); }
};

/// Dimension guess from the largest m with N_m > 0: round(log N_m / (m log q)).
inline unsigned estimate_dimension(std::span<const std::uint64_t> counts, std::uint64_t q) {
  for (std::size_t i = counts.size(); i-- > 0;) {
    if (counts[i] == 0) continue;
    const double m = double(i + 1);
    return static_cast<unsigned>(std::lround(std::log(double(counts[i])) / (m * std::log(double(q)))));
  }
  return 0;
}

inline ComponentEstimate estimate_from_counts(std::vector<std::uint64_t> counts, std::uint64_t q,
                                              std::optional<unsigned> declared) {
  if (counts.empty()) throw Error(ErrorCode::DegreeZero, "need at least one point count");
  ComponentEstimate est;
  est.q = q;
  est.counts = std::move(counts);
  bool all_zero = true;
  for (auto n : est.counts) all_zero &= n == 0;
  if (all_zero) return est;
  est.dimension_declared = declared.has_value();
  est.dimension = declared ? *declared : estimate_dimension(est.counts, q);
  est.components = round_div(BigInt(est.counts[0]), ipow(q, *est.dimension)).convert_to<std::uint64_t>();
  return est;
}

/// Lang-Weil style estimate from N_m = #X(F_{q^m}), m = 1..ladder.size().
inline ComponentEstimate lw_estimate(const ConstructibleSet& X, std::span<const ExtensionField> ladder,
                                     std::optional<unsigned> declared = std::nullopt, const CountOptions& opts = {}) {
  std::vector<std::uint64_t> counts;
  for (const auto& E : ladder) counts.push_back(count_points(X, E, opts).count);
  return estimate_from_counts(std::move(counts), X.field->order(), declared);
}

inline ComponentEstimate lw_estimate(const ConstructibleSet& X, std::uint32_t M, std::optional<unsigned> declared = std::nullopt,
                                     const CountOptions& opts = {}) {
  const auto ladder = extension_ladder(X.field, M);
  return lw_estimate(X, ladder, declared, opts);
}

enum class ClassifierMode { Threshold, Estimator };
enum class VerdictKind { Good, VeryBad, EqualsX };
enum class BadReason { None, Empty, CountLow, CountHigh };

constexpr std::string_view to_string(ClassifierMode m) { return m == ClassifierMode::Threshold ? "threshold" : "estimator"; }

constexpr std::string_view to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::Good: return "Good";
    case VerdictKind::VeryBad: return "VeryBad";
    case VerdictKind::EqualsX: return "EqualsX";
  }
  return "?";
}

constexpr std::string_view to_string(BadReason r) {
  switch (r) {
    case BadReason::None: return "None";
    case BadReason::Empty: return "Empty";
    case BadReason::CountLow: return "CountLow";
    case BadReason::CountHigh: return "CountHigh";
  }
  return "?";
}

inline ClassifierMode parse_classifier_mode(std::string_view s) {
  if (s == "threshold") return ClassifierMode::Threshold;
  if (s == "estimator") return ClassifierMode::Estimator;
  throw Error(ErrorCode::InvalidScenario, "unknown classifier mode '" + std::string(s) + "'");
}

struct SliceVerdict {
  Hyperplane hyperplane;
  VerdictKind kind = VerdictKind::Good;
  BadReason reason = BadReason::None;
  ClassifierMode mode = ClassifierMode::Threshold;
  /// Slice point counts N_1, N_2, ... that were needed for the decision.
  std::vector<std::uint64_t> counts;
};

/// Classifies hyperplanes for one (X, phi, r) over one field.  Point counts
/// of X itself are taken once at construction.
class SliceClassifier {
 public:
  SliceClassifier(ConstructibleSet X, MorphismToPn phi, unsigned r, ClassifierMode mode, std::uint32_t M,
                  CountOptions opts = {})
      : X_(std::move(X)), phi_(std::move(phi)), r_(r), mode_(mode), opts_(opts) {
    if (r_ < 1) throw Error(ErrorCode::DimensionTooSmall, "classifier needs dim X >= 1");
    phi_.validate(X_);
    ladder_ = extension_ladder(X_.field, M);
    opts_.workers = 1;
    const std::size_t ref = std::min<std::size_t>(ladder_.size(), 2);
    for (std::size_t i = 0; i < ref; ++i) x_counts_.push_back(count_points(X_, ladder_[i], opts_).count);
    target_ = ipow(X_.field->order(), r_ - 1);
  }

  const ConstructibleSet& variety() const noexcept { return X_; }
  const MorphismToPn& morphism() const noexcept { return phi_; }
  std::span<const ExtensionField> ladder() const noexcept { return ladder_; }
  /// N_1(X) and, when M >= 2, N_2(X).
  std::span<const std::uint64_t> variety_counts() const noexcept { return x_counts_; }
  ClassifierMode mode() const noexcept { return mode_; }

  SliceVerdict classify(const Hyperplane& H) const { return classify(H, mode_); }

  SliceVerdict classify(const Hyperplane& H, ClassifierMode mode) const {
    const ConstructibleSet S = slice(X_, phi_, H);
    SliceVerdict v;
    v.hyperplane = H;
    v.mode = mode;
    auto count_m = [&](std::size_t i) {
      while (v.counts.size() <= i) v.counts.push_back(count_points(S, ladder_[v.counts.size()], opts_).count);
      return v.counts[i];
    };
    if (mode == ClassifierMode::Estimator)
      for (std::size_t i = 0; i < ladder_.size(); ++i) count_m(i);
    const std::uint64_t n1 = count_m(0);

    if (n1 == 0) {
      bool all_zero = true;
      for (std::size_t i = 1; i < ladder_.size(); ++i) all_zero &= count_m(i) == 0;
      v.kind = VerdictKind::VeryBad;
      v.reason = all_zero ? BadReason::Empty : BadReason::CountLow;
      return v;
    }
    if (n1 == x_counts_[0] && (x_counts_.size() < 2 || count_m(1) == x_counts_[1])) {
      v.kind = VerdictKind::EqualsX;
      return v;
    }
    if (mode == ClassifierMode::Threshold) {
      const BigInt dev = n1 > target_ ? BigInt(n1) - target_ : target_ - n1;
      if (2 * dev >= target_) {
        v.kind = VerdictKind::VeryBad;
        v.reason = BigInt(n1) < target_ ? BadReason::CountLow : BadReason::CountHigh;
      }
      return v;
    }
    const auto est = estimate_from_counts(v.counts, X_.field->order(), r_ - 1);
    if (est.components != 1) {
      v.kind = VerdictKind::VeryBad;
      v.reason = est.components == 0 ? BadReason::CountLow : BadReason::CountHigh;
    }
    return v;
  }

 private:
  ConstructibleSet X_;
  MorphismToPn phi_;
  unsigned r_;
  ClassifierMode mode_;
  CountOptions opts_;
  std::vector<ExtensionField> ladder_;
  std::vector<std::uint64_t> x_counts_;
  BigInt target_;
};

inline SliceVerdict classify(const ConstructibleSet& X, const MorphismToPn& phi, const Hyperplane& H, unsigned r,
                             ClassifierMode mode = ClassifierMode::Threshold, std::uint32_t M = 2, const CountOptions& opts = {}) {
  if (H.coords.size() != phi.n + 1) throw Error(ErrorCode::DimensionMismatch, "hyperplane dimension differs from target");
  return SliceClassifier(X, phi, r, mode, M, opts).classify(H);
}

struct ExponentFit {
  double exponent = 0;
  double intercept = 0;
  /// Largest |log count - fitted log count|.
  double residual = 0;
  std::size_t points = 0;
};

/// Ordinary least squares of log(count) on log(q), ignoring zero counts.
inline ExponentFit fit_exponent(std::span<const std::pair<std::uint64_t, std::uint64_t>> points) {
  std::vector<double> xs, ys;
  for (const auto& [q, c] : points) {
    if (c == 0) continue;
    xs.push_back(std::log(double(q)));
    ys.push_back(std::log(double(c)));
  }
  if (xs.size() < 3)
    throw Error(ErrorCode::FitUnderdetermined, "need at least 3 values of q with nonzero counts, got " + std::to_string(xs.size()));
  const double n = double(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0) throw Error(ErrorCode::FitUnderdetermined, "all q values are equal");
  ExponentFit fit;
  fit.points = xs.size();
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  for (std::size_t i = 0; i < xs.size(); ++i)
    fit.residual = std::max(fit.residual, std::abs(ys[i] - (fit.intercept + fit.exponent * xs[i])));
  return fit;
}

/// (X, phi) instantiated over one field.
struct Instance {
  ConstructibleSet variety;
  MorphismToPn morphism;
};

struct CensusOptions {
  ClassifierMode mode = ClassifierMode::Threshold;
  std::uint32_t M = 2;
  CountOptions count;
  /// Also run the other classifier and count disagreements.
  bool compare_modes = false;
  /// Record wall-clock times (otherwise they are reported as 0).
  bool timing = false;
  /// Check the declared dimension against point-count growth on X.
  bool check_dimension = true;
};

struct CensusRow {
  std::uint64_t q = 0;
  std::uint64_t total_hyperplanes = 0;
  std::uint64_t very_bad = 0;
  std::uint64_t good = 0;
  std::uint64_t equals_x = 0;
  std::uint64_t empty = 0;
  std::uint64_t count_low = 0;
  std::uint64_t count_high = 0;
  ClassifierMode mode = ClassifierMode::Threshold;
  double runtime_ms = 0;
  /// #X(F_q) and the dimension estimate used for validation.
  std::uint64_t variety_points = 0;
  unsigned estimated_dimension = 0;
  SliceStats stats;
  /// 4 sigma^2 / q^{2r-2}.
  ExactRational chebyshev_bound;
  ExactRational very_bad_fraction;
  std::optional<std::uint64_t> disagreements;
  std::vector<Hyperplane> very_bad_hyperplanes;
};

struct CensusReport {
  unsigned r = 0;
  unsigned codim = 0;
  std::vector<CensusRow> rows;
  std::optional<ExponentFit> fit;
  std::string fit_error;

  unsigned theoretical_exponent() const noexcept { return codim + 1; }
};

/// Classifies every hyperplane of the dual P^n(F_q) for each q, then fits the
/// growth exponent of the very-bad counts.  A fit failure is recorded in the
/// report (fit_error) rather than thrown; use require_fit() to enforce it.
inline CensusReport census(const std::function<Instance(std::uint64_t)>& instantiate, unsigned r, unsigned codim,
                           std::span<const std::uint64_t> q_list, const CensusOptions& opts = {}) {
  if (r < 1) throw Error(ErrorCode::DimensionTooSmall, "census needs dim X >= 1");
  CensusReport report;
  report.r = r;
  report.codim = codim;
  for (const std::uint64_t q : q_list) {
    const auto t0 = std::chrono::steady_clock::now();
    Instance inst = instantiate(q);
    inst.variety.validate();
    inst.morphism.validate(inst.variety);
    CensusRow row;
    row.q = q;
    row.mode = opts.mode;

    ProjectiveSpace dual(inst.variety.field, inst.morphism.n);
    // Worst case per slice: every rung of the extension ladder is counted.
    std::uint64_t per_slice = 0;
    for (std::uint32_t m = 1; m <= std::max<std::uint32_t>(opts.M, 1); ++m)
      per_slice += enumeration_size(inst.variety.ambient, checked_pow(inst.variety.field->order(), m));
    check_budget(dual.size() * per_slice, opts.count.budget, "census at q = " + std::to_string(q));

    if (opts.check_dimension) {
      const auto est = lw_estimate(inst.variety, std::max<std::uint32_t>(opts.M, 2), std::nullopt, opts.count);
      row.estimated_dimension = est.dimension.value_or(0);
      if (est.empty() || *est.dimension != r)
        throw Error(ErrorCode::DimensionCheckFailed, "declared r = " + std::to_string(r) + " but point counts over q = " +
                                                         std::to_string(q) + " grow like dimension " +
                                                         (est.empty() ? std::string("(empty)") : std::to_string(*est.dimension)));
    }

    const SliceClassifier classifier(inst.variety, inst.morphism, r, opts.mode, opts.M, opts.count);
    row.variety_points = classifier.variety_counts()[0];
    const ClassifierMode other = opts.mode == ClassifierMode::Threshold ? ClassifierMode::Estimator : ClassifierMode::Threshold;

    struct Partial {
      std::vector<std::pair<std::uint64_t, SliceVerdict>> bad;
      std::uint64_t good = 0, equals_x = 0, disagree = 0;
    };
    auto parts = parallel_ranges(dual.size(), opts.count.workers, [&](std::uint64_t begin, std::uint64_t end) {
      Partial p;
      for (std::uint64_t h = begin; h < end; ++h) {
        const Hyperplane H{dual.at(h)};
        auto v = classifier.classify(H);
        if (opts.compare_modes && classifier.classify(H, other).kind != v.kind) ++p.disagree;
        switch (v.kind) {
          case VerdictKind::Good: ++p.good; break;
          case VerdictKind::EqualsX: ++p.equals_x; break;
          case VerdictKind::VeryBad: p.bad.emplace_back(h, std::move(v)); break;
        }
      }
      return p;
    });
    std::uint64_t disagree = 0;
    for (auto& p : parts) {
      row.good += p.good;
      row.equals_x += p.equals_x;
      disagree += p.disagree;
      for (auto& [h, v] : p.bad) {
        ++row.very_bad;
        row.empty += v.reason == BadReason::Empty;
        row.count_low += v.reason == BadReason::CountLow;
        row.count_high += v.reason == BadReason::CountHigh;
        row.very_bad_hyperplanes.push_back(std::move(v.hyperplane));
      }
    }
    if (opts.compare_modes) row.disagreements = disagree;
    row.total_hyperplanes = dual.size();
    row.stats = closed_form_stats(inst.variety, inst.morphism, opts.count);
    row.chebyshev_bound = chebyshev_very_bad_bound(row.stats.variance, q, r);
    row.very_bad_fraction = ExactRational(BigInt(row.very_bad), BigInt(row.total_hyperplanes));
    if (opts.timing) row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    report.rows.push_back(std::move(row));
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pts;
  for (const auto& row : report.rows) pts.emplace_back(row.q, row.very_bad);
  try {
    report.fit = fit_exponent(pts);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::FitUnderdetermined) throw;
    report.fit_error = e.what();
  }
  return report;
}

inline const ExponentFit& require_fit(const CensusReport& report) {
  if (!report.fit) throw Error(ErrorCode::FitUnderdetermined, report.fit_error);
  return *report.fit;
}

}  // namespace hyperslice
