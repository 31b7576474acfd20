#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace hyperslice {

/// Arbitrary-precision integers and reduced fractions (positive denominator).
using BigInt = boost::multiprecision::cpp_int;
using ExactRational = boost::multiprecision::cpp_rational;

inline ExactRational rational(std::int64_t num, std::int64_t den = 1) { return ExactRational(BigInt(num), BigInt(den)); }

inline BigInt ipow(std::uint64_t base, unsigned exp) { return boost::multiprecision::pow(BigInt(base), exp); }

/// "num/den", or just "num" when the denominator is 1.
inline std::string to_string(const ExactRational& r) {
  auto num = boost::multiprecision::numerator(r);
  auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline double to_double(const ExactRational& r) { return r.convert_to<double>(); }

}  // namespace hyperslice
