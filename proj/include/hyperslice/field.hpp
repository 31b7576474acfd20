#pragma once

// Exact arithmetic in GF(p^e) and in extensions GF(q^m) of such fields.
//
// Every field is a simple extension of its immediate subfield (or a prime
// field).  An element is stored as an integer code: the base-Q digits of its
// canonical coefficient vector over the immediate subfield of order Q, lowest
// degree first.  Because subfield elements are encoded the same way, the code
// is also the base-p digit string of the element over GF(p), and a subfield
// element keeps its code when viewed as a constant polynomial in the
// extension.  The embedding GF(q) -> GF(q^m) is therefore the identity on
// codes.
//
// Reference arithmetic is schoolbook multiplication of coefficient vectors
// followed by reduction by the monic modulus.  Each field memoizes the
// results in log/exp tables at construction (built from, and tested against,
// the schoolbook path).

#include <hyperslice/error.hpp>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hyperslice {

struct Elem {
  std::uint32_t v = 0;

  friend constexpr bool operator==(Elem, Elem) = default;
  friend constexpr auto operator<=>(Elem, Elem) = default;
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// Largest field order accepted anywhere (tables are O(order)).
inline constexpr std::uint32_t kMaxFieldOrder = 1u << 20;
/// Characteristics must be below this; primality is checked by trial division.
inline constexpr std::uint32_t kMaxCharacteristic = 1u << 20;

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace detail

class Field {
  struct Private {};

 public:
  /// Prime field GF(p).  Throws NotPrime / FieldTooLarge.
  static FieldPtr prime(std::uint32_t p) {
    if (p >= kMaxCharacteristic) throw Error(ErrorCode::FieldTooLarge, "characteristic " + std::to_string(p) + " >= 2^20");
    if (!detail::is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
    auto f = std::make_shared<Field>(Private{});
    f->p_ = p;
    f->order_ = p;
    f->degree_ = 1;
    f->abs_degree_ = 1;
    f->build_tables();
    return f;
  }

  /// Simple extension base[T]/(modulus).  `modulus` lists the coefficient
  /// codes of T^0..T^d and must be monic and irreducible over `base`; both are
  /// verified.
  static FieldPtr extension(FieldPtr base, std::vector<Elem> modulus, std::string generator_symbol = "g");

  Field(Private) {}
  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

  std::uint32_t characteristic() const noexcept { return p_; }
  std::uint32_t order() const noexcept { return order_; }
  /// Degree over the immediate subfield (1 for a prime field).
  std::uint32_t degree() const noexcept { return degree_; }
  /// Degree over the prime field.
  std::uint32_t absolute_degree() const noexcept { return abs_degree_; }
  bool is_prime_field() const noexcept { return base_ == nullptr; }
  const FieldPtr& subfield() const noexcept { return base_; }
  /// Coefficient codes of the monic modulus, T^0 first (empty for a prime field).
  std::span<const Elem> modulus() const noexcept { return modulus_; }
  const std::string& generator_symbol() const noexcept { return symbol_; }

  Elem zero() const noexcept { return {0}; }
  Elem one() const noexcept { return {1}; }
  bool contains(Elem a) const noexcept { return a.v < order_; }

  /// Image of an integer under Z -> GF(p) -> this field.
  Elem from_int(std::int64_t x) const noexcept {
    auto r = x % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return {static_cast<std::uint32_t>(r)};
  }

  /// Residue class of T.  Only meaningful when degree() > 1.
  Elem generator() const noexcept { return {base_ ? base_->order_ : 0}; }

  /// Canonical coefficient vector over the immediate subfield, length degree().
  std::vector<Elem> coefficients(Elem a) const {
    if (!base_) return {a};
    std::vector<Elem> c(degree_);
    std::uint32_t x = a.v;
    for (auto& d : c) {
      d.v = x % base_->order_;
      x /= base_->order_;
    }
    return c;
  }

  Elem from_coefficients(std::span<const Elem> c) const {
    if (!base_) return c.empty() ? Elem{} : c[0];
    std::uint32_t code = 0;
    for (std::size_t i = c.size(); i-- > 0;) code = code * base_->order_ + c[i].v;
    return {code};
  }

  Elem add(Elem a, Elem b) const noexcept {
    if (!add_table_.empty()) return {add_table_[std::size_t(a.v) * order_ + b.v]};
    return add_digits(a, b);
  }
  Elem neg(Elem a) const noexcept { return {neg_table_[a.v]}; }
  Elem sub(Elem a, Elem b) const noexcept { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const noexcept {
    if (a.v == 0 || b.v == 0) return {0};
    std::uint32_t s = log_[a.v] + log_[b.v];
    if (s >= order_ - 1) s -= order_ - 1;
    return {exp_[s]};
  }

  Elem inv(Elem a) const {
    if (a.v == 0) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
    std::uint32_t l = log_[a.v];
    return {exp_[l == 0 ? 0 : order_ - 1 - l]};
  }

  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  Elem pow(Elem a, std::uint64_t k) const noexcept {
    if (k == 0) return one();
    if (a.v == 0) return zero();
    auto e = static_cast<std::uint64_t>(log_[a.v]) * (k % (order_ - 1)) % (order_ - 1);
    return {exp_[e]};
  }

  /// Square-and-multiply over the schoolbook product; the reference path for pow.
  Elem pow_schoolbook(Elem a, std::uint64_t k) const {
    Elem r = one();
    while (k) {
      if (k & 1) r = mul_schoolbook(r, a);
      a = mul_schoolbook(a, a);
      k >>= 1;
    }
    return r;
  }

  /// Coefficient-vector product reduced by the modulus, without tables.
  Elem mul_schoolbook(Elem a, Elem b) const {
    if (!base_) return {static_cast<std::uint32_t>(std::uint64_t(a.v) * b.v % p_)};
    const Field& k = *base_;
    auto ca = coefficients(a), cb = coefficients(b);
    std::vector<Elem> prod(2 * degree_ - 1, k.zero());
    for (std::uint32_t i = 0; i < degree_; ++i)
      for (std::uint32_t j = 0; j < degree_; ++j)
        prod[i + j] = k.add(prod[i + j], k.mul(ca[i], cb[j]));
    for (std::size_t top = prod.size(); top-- > degree_;) {
      Elem c = prod[top];
      if (c.v == 0) continue;
      for (std::uint32_t i = 0; i < degree_; ++i)
        prod[top - degree_ + i] = k.sub(prod[top - degree_ + i], k.mul(c, modulus_[i]));
      prod[top] = k.zero();
    }
    prod.resize(degree_);
    return from_coefficients(prod);
  }

  /// True iff a = b^2 for some b.  Every element is a square in characteristic 2.
  bool is_square(Elem a) const noexcept {
    if (p_ == 2 || a.v == 0) return true;
    return pow(a, (order_ - 1) / 2) == one();
  }

  /// Human-readable form: an integer for prime fields, otherwise a polynomial
  /// in the generator symbol, highest degree first.
  std::string format(Elem a) const {
    if (!base_) return std::to_string(a.v);
    auto c = coefficients(a);
    std::string out;
    for (std::size_t i = c.size(); i-- > 0;) {
      if (c[i].v == 0) continue;
      std::string coef = base_->format(c[i]);
      if (!base_->is_prime_field() && c[i].v >= base_->base_->order_) coef = "(" + coef + ")";
      std::string mono = i == 0 ? "" : (i == 1 ? symbol_ : symbol_ + "^" + std::to_string(i));
      std::string term;
      if (mono.empty())
        term = coef;
      else if (c[i] == base_->one())
        term = mono;
      else
        term = coef + "*" + mono;
      out += out.empty() ? term : " + " + term;
    }
    return out.empty() ? "0" : out;
  }

 private:
  Elem add_digits(Elem a, Elem b) const noexcept {
    if (p_ == 2) return {a.v ^ b.v};
    std::uint32_t x = a.v, y = b.v, r = 0, place = 1;
    for (std::uint32_t i = 0; i < abs_degree_; ++i) {
      std::uint32_t d = x % p_ + y % p_;
      if (d >= p_) d -= p_;
      r += d * place;
      place *= p_;
      x /= p_;
      y /= p_;
    }
    return {r};
  }

  Elem neg_digits(Elem a) const noexcept {
    std::uint32_t x = a.v, r = 0, place = 1;
    for (std::uint32_t i = 0; i < abs_degree_; ++i) {
      std::uint32_t d = x % p_;
      r += (d == 0 ? 0 : p_ - d) * place;
      place *= p_;
      x /= p_;
    }
    return {r};
  }

  void build_tables() {
    neg_table_.resize(order_);
    for (std::uint32_t a = 0; a < order_; ++a) neg_table_[a] = neg_digits({a}).v;
    if (order_ <= 1024) {
      add_table_.resize(std::size_t(order_) * order_);
      for (std::uint32_t a = 0; a < order_; ++a)
        for (std::uint32_t b = 0; b < order_; ++b) add_table_[std::size_t(a) * order_ + b] = add_digits({a}, {b}).v;
    }
    // Multiplicative generator: the first code whose order is exactly order-1.
    const std::uint64_t n = order_ - 1;
    auto primes = detail::prime_divisors(n);
    std::uint32_t gen = 1;
    if (n > 1) {
      for (gen = 2; gen < order_; ++gen) {
        bool ok = true;
        for (auto l : primes)
          if (pow_schoolbook({gen}, n / l) == one()) {
            ok = false;
            break;
          }
        if (ok) break;
      }
    }
    exp_.resize(n);
    log_.assign(order_, 0);
    Elem x = one();
    for (std::uint32_t i = 0; i < n; ++i) {
      exp_[i] = x.v;
      log_[x.v] = i;
      x = mul_schoolbook(x, {gen});
    }
  }

  std::uint32_t p_ = 0;
  std::uint32_t order_ = 0;
  std::uint32_t degree_ = 1;
  std::uint32_t abs_degree_ = 1;
  FieldPtr base_;
  std::vector<Elem> modulus_;
  std::string symbol_;
  std::vector<std::uint32_t> add_table_;
  std::vector<std::uint32_t> neg_table_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
};

/// Dense univariate polynomials over a Field (coefficients T^0 first, no
/// trailing zeros).  Only what the irreducibility test needs.
namespace upoly {

using Poly = std::vector<Elem>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back().v == 0) a.pop_back();
}

inline Poly rem(const Field& k, Poly a, const Poly& f) {
  trim(a);
  const Elem lead_inv = k.inv(f.back());
  while (a.size() >= f.size()) {
    Elem c = k.mul(a.back(), lead_inv);
    std::size_t shift = a.size() - f.size();
    for (std::size_t i = 0; i < f.size(); ++i) a[shift + i] = k.sub(a[shift + i], k.mul(c, f[i]));
    trim(a);
  }
  return a;
}

inline Poly mulmod(const Field& k, const Poly& a, const Poly& b, const Poly& f) {
  if (a.empty() || b.empty()) return {};
  Poly prod(a.size() + b.size() - 1, k.zero());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = k.add(prod[i + j], k.mul(a[i], b[j]));
  return rem(k, std::move(prod), f);
}

inline Poly powmod(const Field& k, Poly a, std::uint64_t e, const Poly& f) {
  Poly r = rem(k, {k.one()}, f);
  a = rem(k, std::move(a), f);
  while (e) {
    if (e & 1) r = mulmod(k, r, a, f);
    a = mulmod(k, a, a, f);
    e >>= 1;
  }
  return r;
}

inline Poly gcd(const Field& k, Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(k, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline Poly sub(const Field& k, Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), k.zero());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = k.sub(a[i], b[i]);
  trim(a);
  return a;
}

/// Rabin's test: f of degree d is irreducible over k iff T^{Q^d} = T mod f and
/// gcd(T^{Q^{d/l}} - T, f) = 1 for every prime l dividing d.
inline bool is_irreducible(const Field& k, Poly f) {
  trim(f);
  if (f.size() < 2) return false;
  const std::size_t d = f.size() - 1;
  if (d == 1) return true;
  const Poly t{k.zero(), k.one()};
  std::vector<Poly> frob(d + 1);
  frob[0] = t;
  for (std::size_t i = 1; i <= d; ++i) frob[i] = powmod(k, frob[i - 1], k.order(), f);
  if (!sub(k, frob[d], t).empty()) return false;
  for (auto l : detail::prime_divisors(d)) {
    Poly g = gcd(k, sub(k, frob[d / l], t), f);
    if (g.size() > 1) return false;
  }
  return true;
}

}  // namespace upoly

inline FieldPtr Field::extension(FieldPtr base, std::vector<Elem> modulus, std::string generator_symbol) {
  if (!base) throw Error(ErrorCode::FieldMismatch, "extension of a null field");
  upoly::trim(modulus);
  if (modulus.size() < 2) throw Error(ErrorCode::DegreeZero, "modulus must have degree >= 1");
  if (modulus.back() != base->one()) throw Error(ErrorCode::InvalidScenario, "modulus is not monic");
  for (auto c : modulus)
    if (!base->contains(c)) throw Error(ErrorCode::FieldMismatch, "modulus coefficient outside the base field");
  const std::uint32_t d = static_cast<std::uint32_t>(modulus.size() - 1);
  std::uint64_t order = 1;
  for (std::uint32_t i = 0; i < d; ++i) {
    order *= base->order();
    if (order > kMaxFieldOrder) throw Error(ErrorCode::FieldTooLarge, "field order exceeds 2^20");
  }
  if (!upoly::is_irreducible(*base, modulus)) throw Error(ErrorCode::InvalidScenario, "modulus is reducible");
  auto f = std::make_shared<Field>(Private{});
  f->p_ = base->p_;
  f->order_ = static_cast<std::uint32_t>(order);
  f->degree_ = d;
  f->abs_degree_ = d * base->abs_degree_;
  f->base_ = std::move(base);
  f->modulus_ = std::move(modulus);
  f->symbol_ = std::move(generator_symbol);
  f->build_tables();
  return f;
}

/// Deterministic seeded search for a monic irreducible polynomial of degree d
/// over k.  Candidate j (j = 0, 1, ...) has index (seed + j) mod Q^d, and its
/// coefficients of T^0..T^{d-1} are the base-Q digits of that index, least
/// significant first; T^d has coefficient 1.  The first irreducible candidate
/// is returned.
inline std::vector<Elem> find_irreducible(const Field& k, std::uint32_t d, std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::DegreeZero, "degree must be >= 1");
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < d; ++i) {
    total *= k.order();
    if (total > kMaxFieldOrder) throw Error(ErrorCode::FieldTooLarge, "field order exceeds 2^20");
  }
  for (std::uint64_t j = 0; j < total; ++j) {
    std::uint64_t idx = (seed % total + j) % total;
    upoly::Poly f(d + 1);
    for (std::uint32_t i = 0; i < d; ++i) {
      f[i] = {static_cast<std::uint32_t>(idx % k.order())};
      idx /= k.order();
    }
    f[d] = k.one();
    if (upoly::is_irreducible(k, f)) return f;
  }
  // Unreachable: irreducible polynomials exist in every degree.
  throw Error(ErrorCode::InvalidScenario, "no irreducible polynomial found");
}

/// GF(p^e) with a deterministic modulus chosen by find_irreducible over GF(p).
inline FieldPtr make_field(std::uint32_t p, std::uint32_t e, std::uint64_t seed = 0) {
  if (e < 1) throw Error(ErrorCode::DegreeZero, "extension degree must be >= 1");
  auto prime = Field::prime(p);
  if (e == 1) return prime;
  auto modulus = find_irreducible(*prime, e, seed);
  return Field::extension(prime, std::move(modulus), "g");
}

/// Splits a prime power q into (p, e).  Throws NotPrime when q is not one.
inline std::pair<std::uint32_t, std::uint32_t> split_prime_power(std::uint64_t q) {
  if (q < 2) throw Error(ErrorCode::NotPrime, std::to_string(q) + " is not a prime power");
  auto primes = detail::prime_divisors(q);
  if (primes.size() != 1) throw Error(ErrorCode::NotPrime, std::to_string(q) + " is not a prime power");
  std::uint32_t e = 0;
  while (q > 1) {
    q /= primes[0];
    ++e;
  }
  return {static_cast<std::uint32_t>(primes[0]), e};
}

inline FieldPtr make_field_of_order(std::uint64_t q, std::uint64_t seed = 0) {
  auto [p, e] = split_prime_power(q);
  return make_field(p, e, seed);
}

/// GF(q^m) over a given GF(q) together with its embedding.
struct ExtensionField {
  FieldPtr base;
  FieldPtr field;
  std::uint32_t m = 1;

  /// Constant-polynomial inclusion; codes are preserved (see file comment).
  Elem embed(Elem a) const noexcept { return a; }
};

/// Degree-m extension of `base` with a seeded deterministic modulus.  m = 1
/// returns the base field itself with the identity embedding.
inline ExtensionField extend(const FieldPtr& base, std::uint32_t m, std::uint64_t seed = 0) {
  if (m < 1) throw Error(ErrorCode::DegreeZero, "extension degree must be >= 1");
  if (m == 1) return {base, base, 1};
  auto modulus = find_irreducible(*base, m, seed);
  return {base, Field::extension(base, std::move(modulus), base->is_prime_field() ? "g" : "h"), m};
}

/// All elements in code order: zero first, then lexicographic on coefficient
/// vectors with the highest-degree coefficient most significant.
inline std::vector<Elem> elements(const Field& f) {
  std::vector<Elem> out(f.order());
  for (std::uint32_t i = 0; i < f.order(); ++i) out[i] = {i};
  return out;
}

}  // namespace hyperslice
