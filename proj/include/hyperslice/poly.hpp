#pragma once

#include <hyperslice/error.hpp>
#include <hyperslice/field.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hyperslice {

/// Exponent vector keyed to a Poly's variable list.
using Exponents = std::vector<std::uint32_t>;

inline std::uint32_t total_degree(const Exponents& e) {
  std::uint32_t d = 0;
  for (auto x : e) d += x;
  return d;
}

/// Canonical term order: higher total degree first, ties broken by
/// lexicographically larger exponent vector first (x0 > x1 > ...).
struct TermOrder {
  bool operator()(const Exponents& a, const Exponents& b) const {
    auto da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return a > b;
  }
};

/// Sparse multivariate polynomial over a described field.  The zero
/// polynomial has no terms; stored coefficients are never zero.
class Poly {
 public:
  using Terms = std::map<Exponents, Elem, TermOrder>;

  Poly() = default;
  Poly(FieldPtr field, std::vector<std::string> vars) : field_(std::move(field)), vars_(std::move(vars)) {}

  static Poly constant(FieldPtr field, std::vector<std::string> vars, Elem c) {
    Poly p(std::move(field), std::move(vars));
    p.add_term(Exponents(p.vars_.size(), 0), c);
    return p;
  }

  static Poly variable(FieldPtr field, std::vector<std::string> vars, std::size_t index) {
    Poly p(std::move(field), std::move(vars));
    if (index >= p.vars_.size()) throw Error(ErrorCode::ArityMismatch, "variable index out of range");
    Exponents e(p.vars_.size(), 0);
    e[index] = 1;
    p.add_term(std::move(e), p.field_->one());
    return p;
  }

  const FieldPtr& field() const noexcept { return field_; }
  const std::vector<std::string>& variables() const noexcept { return vars_; }
  std::size_t arity() const noexcept { return vars_.size(); }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Adds c * x^e, merging with an existing term and dropping zeros.
  void add_term(Exponents e, Elem c) {
    if (e.size() != vars_.size()) throw Error(ErrorCode::ArityMismatch, "exponent vector length differs from variable count");
    if (c.v == 0) return;
    auto [it, inserted] = terms_.try_emplace(std::move(e), c);
    if (!inserted) {
      it->second = field_->add(it->second, c);
      if (it->second.v == 0) terms_.erase(it);
    }
  }

  Elem coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Elem{} : it->second;
  }

  Elem constant_term() const { return coefficient(Exponents(vars_.size(), 0)); }

  std::uint32_t degree() const {
    std::uint32_t d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
    return d;
  }

  /// d when every term has total degree d; nullopt when not homogeneous.
  std::optional<std::uint32_t> homogeneous_degree() const {
    if (is_zero()) throw Error(ErrorCode::ZeroPolynomial, "homogeneity of the zero polynomial");
    std::uint32_t d = total_degree(terms_.begin()->first);
    for (const auto& [e, c] : terms_)
      if (total_degree(e) != d) return std::nullopt;
    return d;
  }

  Poly operator-() const {
    Poly r(field_, vars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, field_->neg(c));
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    check_compatible(a, b);
    Poly r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
  }

  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    check_compatible(a, b);
    Poly r(a.field_, a.vars_);
    const Field& f = *a.field_;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(ea.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        r.add_term(std::move(e), f.mul(ca, cb));
      }
    return r;
  }

  Poly scaled(Elem c) const {
    Poly r(field_, vars_);
    if (c.v == 0) return r;
    for (const auto& [e, k] : terms_) r.terms_.emplace(e, field_->mul(k, c));
    return r;
  }

  Poly pow(std::uint32_t k) const {
    Poly r = constant(field_, vars_, field_->one());
    Poly base = *this;
    while (k) {
      if (k & 1) r = r * base;
      k >>= 1;
      if (k) base = base * base;
    }
    return r;
  }

  /// Same coefficients viewed over another field.  Used by base_change; the
  /// caller guarantees codes are meaningful there.
  Poly relabeled(FieldPtr field) const {
    Poly r(std::move(field), vars_);
    r.terms_ = terms_;
    return r;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.field_ == b.field_ && a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }

  /// Canonical text in the expression grammar: terms in TermOrder joined by
  /// " + ", coefficients as field literals.
  std::string to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (const auto& [e, c] : terms_) {
      std::string mono;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += vars_[i];
        if (e[i] > 1) mono += "^" + std::to_string(e[i]);
      }
      std::string coef = field_->format(c);
      if (coef.find(' ') != std::string::npos || (!mono.empty() && coef.find('^') != std::string::npos))
        coef = "(" + coef + ")";
      std::string term;
      if (mono.empty())
        term = coef;
      else if (c == field_->one())
        term = mono;
      else
        term = coef + "*" + mono;
      out += out.empty() ? term : " + " + term;
    }
    return out;
  }

 private:
  static void check_compatible(const Poly& a, const Poly& b) {
    if (a.field_ != b.field_) throw Error(ErrorCode::FieldMismatch, "polynomials over different fields");
    if (a.vars_ != b.vars_) throw Error(ErrorCode::ArityMismatch, "polynomials over different variable lists");
  }

  FieldPtr field_;
  std::vector<std::string> vars_;
  Terms terms_;
};

/// Flattened polynomial for hot evaluation loops.  Per point the cost is one
/// pass building variable powers up to each variable's maximum exponent,
/// then one product per term factor.
class CompiledPoly {
 public:
  CompiledPoly() = default;

  explicit CompiledPoly(const Poly& f) : arity_(f.arity()), max_exp_(f.arity(), 0) {
    for (const auto& [e, c] : f.terms()) {
      Term t{c, static_cast<std::uint32_t>(factors_.size()), 0};
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        max_exp_[i] = std::max(max_exp_[i], e[i]);
        factors_.push_back({static_cast<std::uint32_t>(i), e[i]});
        ++t.count;
      }
      terms_.push_back(t);
    }
    offsets_.resize(arity_ + 1, 0);
    for (std::size_t i = 0; i < arity_; ++i) offsets_[i + 1] = offsets_[i] + max_exp_[i];
  }

  std::size_t arity() const noexcept { return arity_; }
  /// Scratch size needed by evaluate().
  std::size_t scratch_size() const noexcept { return offsets_.empty() ? 0 : offsets_.back(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// `k` is the field the point lives in; coefficients are read as codes of k.
  Elem evaluate(const Field& k, std::span<const Elem> point, std::span<Elem> scratch) const noexcept {
    for (std::size_t i = 0; i < arity_; ++i) {
      if (max_exp_[i] == 0) continue;
      Elem* pw = scratch.data() + offsets_[i];
      pw[0] = point[i];
      for (std::uint32_t j = 1; j < max_exp_[i]; ++j) pw[j] = k.mul(pw[j - 1], point[i]);
    }
    Elem acc = k.zero();
    for (const auto& t : terms_) {
      Elem v = t.coef;
      for (std::uint32_t j = 0; j < t.count && v.v != 0; ++j) {
        const auto& fa = factors_[t.first + j];
        v = k.mul(v, scratch[offsets_[fa.var] + fa.exp - 1]);
      }
      acc = k.add(acc, v);
    }
    return acc;
  }

 private:
  struct Term {
    Elem coef;
    std::uint32_t first;
    std::uint32_t count;
  };
  struct Factor {
    std::uint32_t var;
    std::uint32_t exp;
  };
  std::size_t arity_ = 0;
  std::vector<std::uint32_t> max_exp_;
  std::vector<std::uint32_t> offsets_;
  std::vector<Term> terms_;
  std::vector<Factor> factors_;
};

/// Value of f at a point with coordinates in f's own field.
inline Elem eval(const Poly& f, std::span<const Elem> point) {
  if (point.size() != f.arity())
    throw Error(ErrorCode::ArityMismatch, "point has " + std::to_string(point.size()) + " coordinates, polynomial has " +
                                              std::to_string(f.arity()) + " variables");
  CompiledPoly c(f);
  std::vector<Elem> scratch(c.scratch_size());
  return c.evaluate(*f.field(), point, scratch);
}

/// Value of f at a point of E.field^arity, embedding coefficients on the fly.
inline Elem eval(const Poly& f, const ExtensionField& E, std::span<const Elem> point) {
  if (f.field() != E.base) throw Error(ErrorCode::FieldMismatch, "polynomial field is not the extension's base");
  if (point.size() != f.arity()) throw Error(ErrorCode::ArityMismatch, "point arity differs from variable count");
  const Field& k = *E.field;
  Elem acc = k.zero();
  for (const auto& [e, c] : f.terms()) {
    Elem v = E.embed(c);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) v = k.mul(v, k.pow(point[i], e[i]));
    acc = k.add(acc, v);
  }
  return acc;
}

/// f with coefficients mapped through E's embedding.
inline Poly base_change(const Poly& f, const ExtensionField& E) {
  if (f.field() != E.base) throw Error(ErrorCode::FieldMismatch, "polynomial field is not the extension's base");
  Poly r(E.field, f.variables());
  for (const auto& [e, c] : f.terms()) r.add_term(e, E.embed(c));
  return r;
}

}  // namespace hyperslice
