#pragma once

// Constructible sets X = V(E) \ V(G) in affine or projective space, morphisms
// X -> P^n given by polynomial components, and brute-force point counting over
// extensions of the defining field.
//
// Affine enumeration order: the coordinate tuple read as a base-Q number,
// first variable most significant.  Projective enumeration follows
// ProjectiveSpace.  Work is split into contiguous index ranges; partial counts
// are summed, so the result does not depend on the number of workers.

#include <hyperslice/error.hpp>
#include <hyperslice/field.hpp>
#include <hyperslice/parallel.hpp>
#include <hyperslice/poly.hpp>
#include <hyperslice/projective.hpp>

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hyperslice {

inline constexpr std::uint64_t kDefaultBudget = 1'000'000'000;

enum class AmbientKind { Affine, Projective };

struct Ambient {
  AmbientKind kind = AmbientKind::Affine;
  /// N: affine space A^N has N variables, projective P^N has N+1.
  unsigned dim = 1;
  std::vector<std::string> variables;

  std::size_t arity() const noexcept { return variables.size(); }
  bool projective() const noexcept { return kind == AmbientKind::Projective; }
};

struct CountOptions {
  std::uint64_t budget = kDefaultBudget;
  unsigned workers = 1;
};

struct ConstructibleSet {
  Ambient ambient;
  FieldPtr field;
  std::vector<Poly> equations;
  /// A point survives iff this list is empty or some member is nonzero there.
  std::vector<Poly> inequations;

  void validate() const {
    const std::size_t want = ambient.projective() ? ambient.dim + 1 : ambient.dim;
    if (ambient.dim < 1) throw Error(ErrorCode::InvalidScenario, "ambient dimension must be >= 1");
    if (ambient.arity() != want)
      throw Error(ErrorCode::ArityMismatch, "ambient of dimension " + std::to_string(ambient.dim) + " needs " +
                                                std::to_string(want) + " variables");
    auto check = [&](const Poly& f, const char* what) {
      if (f.field() != field) throw Error(ErrorCode::FieldMismatch, std::string(what) + " over a different field");
      if (f.variables() != ambient.variables) throw Error(ErrorCode::ArityMismatch, std::string(what) + " over different variables");
      if (ambient.projective() && !f.is_zero() && !f.homogeneous_degree())
        throw Error(ErrorCode::InvalidScenario, std::string(what) + " '" + f.to_string() + "' is not homogeneous");
    };
    for (const auto& f : equations) check(f, "equation");
    for (const auto& g : inequations) check(g, "inequation");
  }
};

struct MorphismToPn {
  unsigned n = 1;
  std::vector<Poly> components;

  void validate(const ConstructibleSet& X) const {
    if (n < 1) throw Error(ErrorCode::DimensionMismatch, "target dimension must be >= 1");
    if (components.size() != n + 1)
      throw Error(ErrorCode::DimensionMismatch, "morphism to P^" + std::to_string(n) + " needs " + std::to_string(n + 1) +
                                                    " components, got " + std::to_string(components.size()));
    bool all_zero = true;
    std::optional<std::uint32_t> degree;
    for (const auto& f : components) {
      if (f.field() != X.field) throw Error(ErrorCode::FieldMismatch, "morphism component over a different field");
      if (f.variables() != X.ambient.variables) throw Error(ErrorCode::ArityMismatch, "morphism component over different variables");
      if (f.is_zero()) continue;
      all_zero = false;
      if (X.ambient.projective()) {
        auto d = f.homogeneous_degree();
        if (!d) throw Error(ErrorCode::InvalidScenario, "morphism component '" + f.to_string() + "' is not homogeneous");
        if (degree && *degree != *d) throw Error(ErrorCode::InvalidScenario, "morphism components of different degrees");
        degree = d;
      }
    }
    if (all_zero) throw Error(ErrorCode::InvalidScenario, "all morphism components are zero");
  }
};

struct PointCountRecord {
  std::uint32_t m = 1;
  std::uint64_t count = 0;
  double wall_ms = 0;
};

/// Number of points enumerated when counting over a field of order Q.
inline std::uint64_t enumeration_size(const Ambient& a, std::uint64_t Q) {
  if (a.projective()) return (checked_pow(Q, a.dim + 1) - 1) / (Q - 1);
  return checked_pow(Q, a.dim);
}

inline void check_budget(std::uint64_t cost, std::uint64_t budget, const std::string& what) {
  if (cost > budget)
    throw Error(ErrorCode::BudgetExceeded, what + " needs " + std::to_string(cost) + " evaluations, budget is " +
                                               std::to_string(budget));
}

namespace detail {

/// Calls visit(point) for the enumeration indices [begin, end) of the ambient over k.
template <class Visit>
void for_each_point(const Ambient& a, const Field& k, std::uint64_t begin, std::uint64_t end, Visit&& visit) {
  if (begin >= end) return;
  const std::size_t arity = a.arity();
  std::vector<Elem> pt(arity);
  if (a.projective()) {
    ProjectiveSpace space(k.order(), a.dim);
    space.unrank(begin, pt);
    for (std::uint64_t i = begin; i < end; ++i) {
      visit(std::span<const Elem>(pt));
      if (i + 1 < end) space.advance(pt);
    }
    return;
  }
  const std::uint32_t q = k.order();
  std::uint64_t x = begin;
  for (std::size_t i = arity; i-- > 0;) {
    pt[i] = Elem{static_cast<std::uint32_t>(x % q)};
    x /= q;
  }
  for (std::uint64_t i = begin; i < end; ++i) {
    visit(std::span<const Elem>(pt));
    for (std::size_t j = arity; j-- > 0;) {
      if (++pt[j].v < q) break;
      pt[j].v = 0;
    }
  }
}

/// Compiled equations and inequations of a constructible set.
class Membership {
 public:
  explicit Membership(const ConstructibleSet& X) {
    for (const auto& f : X.equations) eqs_.emplace_back(f);
    for (const auto& g : X.inequations) ineqs_.emplace_back(g);
    for (const auto& c : eqs_) scratch_ = std::max(scratch_, c.scratch_size());
    for (const auto& c : ineqs_) scratch_ = std::max(scratch_, c.scratch_size());
  }

  std::size_t scratch_size() const noexcept { return scratch_; }

  bool contains(const Field& k, std::span<const Elem> pt, std::span<Elem> scratch) const noexcept {
    for (const auto& e : eqs_)
      if (e.evaluate(k, pt, scratch).v != 0) return false;
    if (ineqs_.empty()) return true;
    for (const auto& g : ineqs_)
      if (g.evaluate(k, pt, scratch).v != 0) return true;
    return false;
  }

 private:
  std::vector<CompiledPoly> eqs_;
  std::vector<CompiledPoly> ineqs_;
  std::size_t scratch_ = 0;
};

}  // namespace detail

/// Exact #X(F_{q^m}) by full enumeration of the ambient over E.field.
inline PointCountRecord count_points(const ConstructibleSet& X, const ExtensionField& E, const CountOptions& opts = {}) {
  for (const auto* list : {&X.equations, &X.inequations})
    for (const auto& f : *list)
      if (f.field() != E.base) throw Error(ErrorCode::FieldMismatch, "set is not defined over the extension's base field");
  const auto t0 = std::chrono::steady_clock::now();
  const Field& k = *E.field;
  const std::uint64_t total = enumeration_size(X.ambient, k.order());
  check_budget(total, opts.budget, "point count over GF(" + std::to_string(k.order()) + ")");
  const detail::Membership member(X);
  auto partial = parallel_ranges(total, opts.workers, [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<Elem> scratch(member.scratch_size());
    std::uint64_t n = 0;
    detail::for_each_point(X.ambient, k, begin, end, [&](std::span<const Elem> pt) { n += member.contains(k, pt, scratch); });
    return n;
  });
  PointCountRecord rec;
  rec.m = E.m;
  for (auto n : partial) rec.count += n;
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

/// #X(F_q) over the defining field.
inline PointCountRecord count_points(const ConstructibleSet& X, const CountOptions& opts = {}) {
  return count_points(X, ExtensionField{X.field, X.field, 1}, opts);
}

/// phi^{-1}H: X with the extra equation sum c_i f_i.
inline ConstructibleSet slice(const ConstructibleSet& X, const MorphismToPn& phi, const Hyperplane& H) {
  if (H.coords.size() != phi.components.size())
    throw Error(ErrorCode::DimensionMismatch, "hyperplane has " + std::to_string(H.coords.size()) + " coordinates, morphism has " +
                                                  std::to_string(phi.components.size()) + " components");
  Poly eq(X.field, X.ambient.variables);
  for (std::size_t i = 0; i < H.coords.size(); ++i) eq = eq + phi.components[i].scaled(H.coords[i]);
  ConstructibleSet out = X;
  out.equations.push_back(std::move(eq));
  return out;
}

struct FiberProfile {
  /// #X(F_q).
  std::uint64_t domain_size = 0;
  /// #phi(X(F_q)).
  std::uint64_t image_size = 0;
  /// Largest fiber.
  std::uint64_t max_fiber = 0;
  /// Sum over image points of the squared fiber size.
  std::uint64_t collision_sum = 0;
  /// (index in P^n(F_q) enumeration order, fiber size), sorted by index.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> fibers;
};

/// Upper limit on #P^n(F_q) for the dense fiber histogram.
inline constexpr std::uint64_t kMaxImageSpace = std::uint64_t{1} << 24;

namespace detail {

class CompiledMorphism {
 public:
  explicit CompiledMorphism(const MorphismToPn& phi) {
    for (const auto& f : phi.components) comps_.emplace_back(f);
    for (const auto& c : comps_) scratch_ = std::max(scratch_, c.scratch_size());
  }
  std::size_t scratch_size() const noexcept { return scratch_; }
  std::size_t size() const noexcept { return comps_.size(); }

  /// Writes the component values; returns false when they all vanish.
  bool apply(const Field& k, std::span<const Elem> pt, std::span<Elem> out, std::span<Elem> scratch) const noexcept {
    bool nonzero = false;
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      out[i] = comps_[i].evaluate(k, pt, scratch);
      nonzero |= out[i].v != 0;
    }
    return nonzero;
  }

 private:
  std::vector<CompiledPoly> comps_;
  std::size_t scratch_ = 0;
};

inline std::string format_point(const Field& k, std::span<const Elem> pt) {
  std::string s = "(";
  for (std::size_t i = 0; i < pt.size(); ++i) s += (i ? ", " : "") + k.format(pt[i]);
  return s + ")";
}

}  // namespace detail

/// Image size, largest fiber and collision sum of phi on X(F_q).
inline FiberProfile fiber_profile(const ConstructibleSet& X, const MorphismToPn& phi, const CountOptions& opts = {}) {
  const Field& k = *X.field;
  ProjectiveSpace target(X.field, phi.n);
  if (target.size() > kMaxImageSpace) throw Error(ErrorCode::BudgetExceeded, "target projective space too large for fiber histogram");
  if (phi.components.size() != phi.n + 1) throw Error(ErrorCode::DimensionMismatch, "component count differs from n+1");
  const std::uint64_t total = enumeration_size(X.ambient, k.order());
  check_budget(total, opts.budget, "fiber profile");
  const detail::Membership member(X);
  const detail::CompiledMorphism map(phi);
  auto partial = parallel_ranges(total, opts.workers, [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<std::uint64_t> hist(target.size(), 0);
    std::vector<Elem> scratch(std::max(member.scratch_size(), map.scratch_size()));
    std::vector<Elem> value(map.size());
    detail::for_each_point(X.ambient, k, begin, end, [&](std::span<const Elem> pt) {
      if (!member.contains(k, pt, scratch)) return;
      if (!map.apply(k, pt, value, scratch))
        throw Error(ErrorCode::BasePointHit, "all components vanish at " + detail::format_point(k, pt));
      auto y = normalize(k, value);
      ++hist[target.index_of(*y)];
    });
    return hist;
  });
  FiberProfile prof;
  for (std::uint64_t y = 0; y < target.size(); ++y) {
    std::uint64_t f = 0;
    for (const auto& h : partial) f += h[y];
    if (f == 0) continue;
    prof.fibers.emplace_back(y, f);
    prof.domain_size += f;
    ++prof.image_size;
    prof.max_fiber = std::max(prof.max_fiber, f);
    prof.collision_sum += f * f;
  }
  return prof;
}

struct BasePointReport {
  bool base_point_free = true;
  /// Coordinates over E.field of an offending point, if any.
  std::optional<std::vector<Elem>> witness;
};

/// Looks for an F_{q^m}-point of X where every component of phi vanishes.
/// The witness is the first such point in enumeration order.
inline BasePointReport check_base_point_free(const ConstructibleSet& X, const MorphismToPn& phi, const ExtensionField& E,
                                             const CountOptions& opts = {}) {
  const Field& k = *E.field;
  const std::uint64_t total = enumeration_size(X.ambient, k.order());
  check_budget(total, opts.budget, "base point check");
  const detail::Membership member(X);
  const detail::CompiledMorphism map(phi);
  auto partial = parallel_ranges(total, opts.workers, [&](std::uint64_t begin, std::uint64_t end) {
    std::optional<std::vector<Elem>> found;
    std::vector<Elem> scratch(std::max(member.scratch_size(), map.scratch_size()));
    std::vector<Elem> value(map.size());
    detail::for_each_point(X.ambient, k, begin, end, [&](std::span<const Elem> pt) {
      if (found || !member.contains(k, pt, scratch)) return;
      if (!map.apply(k, pt, value, scratch)) found.emplace(pt.begin(), pt.end());
    });
    return found;
  });
  for (auto& w : partial)
    if (w) return {false, std::move(w)};
  return {};
}

inline BasePointReport check_base_point_free(const ConstructibleSet& X, const MorphismToPn& phi, const CountOptions& opts = {}) {
  return check_base_point_free(X, phi, ExtensionField{X.field, X.field, 1}, opts);
}

}  // namespace hyperslice
