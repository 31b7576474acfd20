#pragma once

// Text expressions for polynomials.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' nonneg-int)?
//   atom   := int-literal | var-name | 'g' | '(' expr ')'
//
// Integer literals reduce mod p.  'g' is the canonical generator of the field
// (the residue of the modulus variable) and is only legal when e > 1.
// Variable names match [A-Za-z_][A-Za-z0-9_]* and may not be "g".

#include <hyperslice/error.hpp>
#include <hyperslice/field.hpp>
#include <hyperslice/poly.hpp>

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace hyperslice {

inline constexpr std::uint32_t kMaxParsedExponent = 1u << 16;

namespace detail {

class ExprParser {
 public:
  ExprParser(std::string_view text, const std::vector<std::string>& vars, const FieldPtr& field)
      : text_(text), vars_(vars), field_(field) {}

  Poly run() {
    Poly p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail(ErrorCode::SyntaxError, std::string("unexpected '") + text_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(ErrorCode code, const std::string& msg) const {
    throw Error(code, "at column " + std::to_string(pos_ + 1) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Poly expr() {
    Poly acc = term();
    for (;;) {
      if (accept('+'))
        acc = acc + term();
      else if (accept('-'))
        acc = acc - term();
      else
        return acc;
    }
  }

  Poly term() {
    Poly acc = factor();
    while (accept('*')) acc = acc * factor();
    return acc;
  }

  Poly factor() {
    Poly base = atom();
    if (!accept('^')) return base;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '-') fail(ErrorCode::NegativeExponent, "negative exponent");
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail(ErrorCode::SyntaxError, "expected a nonnegative integer exponent");
    std::uint64_t k = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      k = k * 10 + std::uint64_t(text_[pos_] - '0');
      if (k > kMaxParsedExponent) fail(ErrorCode::SyntaxError, "exponent too large");
      ++pos_;
    }
    return base.pow(static_cast<std::uint32_t>(k));
  }

  Poly atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail(ErrorCode::SyntaxError, "unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Poly inner = expr();
      if (!accept(')')) fail(ErrorCode::SyntaxError, "expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::uint64_t p = field_->characteristic();
      std::uint64_t r = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        r = (r * 10 + std::uint64_t(text_[pos_] - '0')) % p;
        ++pos_;
      }
      return Poly::constant(field_, vars_, {static_cast<std::uint32_t>(r)});
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "g") {
        if (field_->is_prime_field()) {
          pos_ = start;
          fail(ErrorCode::GeneratorInPrimeField, "generator 'g' used over a prime field");
        }
        return Poly::constant(field_, vars_, field_->generator());
      }
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return Poly::variable(field_, vars_, i);
      pos_ = start;
      fail(ErrorCode::UnknownVariable, "unknown variable '" + std::string(name) + "'");
    }
    fail(ErrorCode::SyntaxError, std::string("unexpected '") + c + "'");
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  const FieldPtr& field_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline bool is_valid_variable_name(std::string_view name) {
  if (name.empty() || name == "g") return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

/// Parses `text` into a canonical polynomial over `field` in the variables `vars`.
inline Poly parse_poly(std::string_view text, const std::vector<std::string>& vars, const FieldPtr& field) {
  for (const auto& v : vars)
    if (!is_valid_variable_name(v)) throw Error(ErrorCode::SyntaxError, "invalid variable name '" + v + "'");
  return detail::ExprParser(text, vars, field).run();
}

}  // namespace hyperslice
