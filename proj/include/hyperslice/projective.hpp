#pragma once

// Projective space P^n(F_q), its dual, incidence, and linear spans.
//
// Canonical form everywhere: the first nonzero homogeneous coordinate is 1.
// Enumeration order (shared by points and hyperplanes): first by the position
// of the leading 1 (position 0 first), then by the remaining coordinates read
// as a base-q number with the last coordinate least significant and codes as
// digits.  index_of() and at() are inverse bijections onto [0, size()).

#include <hyperslice/error.hpp>
#include <hyperslice/field.hpp>
#include <hyperslice/rational.hpp>
#include <hyperslice/rng.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hyperslice {

template <class Tag>
struct Projective {
  std::vector<Elem> coords;

  std::size_t dimension() const noexcept { return coords.empty() ? 0 : coords.size() - 1; }
  friend bool operator==(const Projective&, const Projective&) = default;
  friend auto operator<=>(const Projective&, const Projective&) = default;
};

using ProjPoint = Projective<struct ProjPointTag>;
using Hyperplane = Projective<struct HyperplaneTag>;

/// Scales v so its first nonzero coordinate is 1; nullopt for the zero vector.
inline std::optional<std::vector<Elem>> normalize(const Field& k, std::vector<Elem> v) {
  std::size_t i = 0;
  while (i < v.size() && v[i].v == 0) ++i;
  if (i == v.size()) return std::nullopt;
  if (v[i] != k.one()) {
    const Elem s = k.inv(v[i]);
    for (std::size_t j = i; j < v.size(); ++j) v[j] = k.mul(v[j], s);
  }
  return v;
}

template <class P>
P make_projective(const Field& k, std::vector<Elem> v) {
  auto n = normalize(k, std::move(v));
  if (!n) throw Error(ErrorCode::EmptyInput, "all homogeneous coordinates are zero");
  return P{std::move(*n)};
}

inline std::uint64_t checked_pow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (r > (std::uint64_t{1} << 62) / base) throw Error(ErrorCode::BudgetExceeded, "enumeration size overflows 64 bits");
    r *= base;
  }
  return r;
}

/// Indexing of the normalized vectors of length n+1 over a field.
class ProjectiveSpace {
 public:
  /// Only the field order matters: code 1 is the identity in every field.
  ProjectiveSpace(std::uint32_t q, unsigned n) : q_(q), n_(n) {
    if (n_ < 1) throw Error(ErrorCode::DimensionMismatch, "projective dimension must be >= 1");
    size_ = (checked_pow(q_, n_ + 1) - 1) / (q_ - 1);
  }
  ProjectiveSpace(const FieldPtr& field, unsigned n) : ProjectiveSpace(field->order(), n) {}

  std::uint32_t field_order() const noexcept { return q_; }
  unsigned dimension() const noexcept { return n_; }
  std::uint64_t size() const noexcept { return size_; }

  /// Writes the idx-th normalized vector into out (length n+1).
  void unrank(std::uint64_t idx, std::span<Elem> out) const noexcept {
    const std::uint64_t q = q_;
    unsigned lead = 0;
    std::uint64_t block = size_ - (size_ - 1) / q;  // q^n
    while (idx >= block) {
      idx -= block;
      ++lead;
      block /= q;
    }
    for (unsigned i = 0; i < lead; ++i) out[i] = Elem{0};
    out[lead] = Elem{1};
    for (unsigned i = n_; i > lead; --i) {
      out[i] = Elem{static_cast<std::uint32_t>(idx % q)};
      idx /= q;
    }
  }

  std::vector<Elem> at(std::uint64_t idx) const {
    std::vector<Elem> v(n_ + 1);
    unrank(idx, v);
    return v;
  }

  /// Index of an already normalized vector.
  std::uint64_t index_of(std::span<const Elem> v) const noexcept {
    const std::uint64_t q = q_;
    unsigned lead = 0;
    while (v[lead].v == 0) ++lead;
    std::uint64_t idx = 0, block = size_ - (size_ - 1) / q;
    for (unsigned i = 0; i < lead; ++i) {
      idx += block;
      block /= q;
    }
    std::uint64_t rest = 0;
    for (unsigned i = lead + 1; i <= n_; ++i) rest = rest * q + v[i].v;
    return idx + rest;
  }

  /// Advances a normalized vector to its successor in enumeration order.
  void advance(std::span<Elem> v) const noexcept {
    const std::uint32_t q = q_;
    unsigned lead = 0;
    while (v[lead].v == 0) ++lead;
    for (unsigned i = n_; i > lead; --i) {
      if (++v[i].v < q) return;
      v[i].v = 0;
    }
    // Carry out of the free block: move the leading 1 right.
    v[lead].v = 0;
    if (lead < n_) v[lead + 1] = Elem{1};
  }

 private:
  std::uint32_t q_;
  unsigned n_;
  std::uint64_t size_ = 0;
};

inline std::vector<ProjPoint> enum_points(const FieldPtr& field, unsigned n) {
  ProjectiveSpace space(field, n);
  std::vector<ProjPoint> out;
  out.reserve(space.size());
  for (std::uint64_t i = 0; i < space.size(); ++i) out.push_back({space.at(i)});
  return out;
}

inline std::vector<Hyperplane> enum_hyperplanes(const FieldPtr& field, unsigned n) {
  ProjectiveSpace space(field, n);
  std::vector<Hyperplane> out;
  out.reserve(space.size());
  for (std::uint64_t i = 0; i < space.size(); ++i) out.push_back({space.at(i)});
  return out;
}

inline Elem dot(const Field& k, std::span<const Elem> a, std::span<const Elem> b) {
  Elem acc = k.zero();
  for (std::size_t i = 0; i < a.size(); ++i) acc = k.add(acc, k.mul(a[i], b[i]));
  return acc;
}

inline bool incident(const Field& k, const ProjPoint& y, const Hyperplane& H) {
  if (y.coords.size() != H.coords.size())
    throw Error(ErrorCode::DimensionMismatch, "point in P^" + std::to_string(y.dimension()) + ", hyperplane in P^" +
                                                  std::to_string(H.dimension()));
  return dot(k, y.coords, H.coords).v == 0;
}

/// Probability that a uniformly random hyperplane of P^n(F_q) contains a fixed point.
inline ExactRational p1(std::uint64_t q, unsigned n) {
  return ExactRational(ipow(q, n) - 1, ipow(q, n + 1) - 1);
}

/// Probability that a uniformly random hyperplane contains two fixed distinct points.
inline ExactRational p2(std::uint64_t q, unsigned n) {
  return ExactRational(ipow(q, n - 1) - 1, ipow(q, n + 1) - 1);
}

/// Uniform hyperplane: a uniformly random nonzero coefficient vector,
/// normalized.  Every hyperplane has exactly q-1 nonzero representatives.
inline Hyperplane sample_hyperplane(const Field& k, unsigned n, CounterRng& rng) {
  const std::uint64_t q = k.order();
  const std::uint64_t total = checked_pow(q, n + 1);
  std::uint64_t x = 1 + rng.uniform(total - 1);
  std::vector<Elem> v(n + 1);
  for (unsigned i = n + 1; i-- > 0;) {
    v[i] = Elem{static_cast<std::uint32_t>(x % q)};
    x /= q;
  }
  return make_projective<Hyperplane>(k, std::move(v));
}

/// Rank of a matrix over k by Gaussian elimination (rows may be of any equal length).
inline std::size_t rank(const Field& k, std::vector<std::vector<Elem>> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t pivot = r;
    while (pivot < rows.size() && rows[pivot][c].v == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[r], rows[pivot]);
    const Elem s = k.inv(rows[r][c]);
    for (auto& x : rows[r]) x = k.mul(x, s);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c].v == 0) continue;
      const Elem f = rows[i][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] = k.sub(rows[i][j], k.mul(f, rows[r][j]));
    }
    ++r;
  }
  return r;
}

namespace detail {

inline std::vector<std::vector<Elem>> point_matrix(std::span<const ProjPoint> points) {
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "empty point set");
  std::vector<std::vector<Elem>> rows;
  rows.reserve(points.size());
  for (const auto& p : points) {
    if (p.coords.size() != points[0].coords.size()) throw Error(ErrorCode::DimensionMismatch, "points of different dimensions");
    rows.push_back(p.coords);
  }
  return rows;
}

}  // namespace detail

/// Projective dimension of the linear span of the points (rank - 1).
inline int span_dim(const Field& k, std::span<const ProjPoint> points) {
  return static_cast<int>(rank(k, detail::point_matrix(points))) - 1;
}

/// Dimension of the linear system of hyperplanes containing all the points:
/// n - rank, which is -1 when no hyperplane contains them.
inline int span_locus_dim(const Field& k, std::span<const ProjPoint> points) {
  auto rows = detail::point_matrix(points);
  const int n = static_cast<int>(rows[0].size()) - 1;
  return n - static_cast<int>(rank(k, std::move(rows)));
}

}  // namespace hyperslice
