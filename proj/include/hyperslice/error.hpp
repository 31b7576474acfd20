#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperslice {

enum class ErrorCode {
  NotPrime,
  DegreeZero,
  FieldTooLarge,
  DivisionByZero,
  SyntaxError,
  UnknownVariable,
  GeneratorInPrimeField,
  NegativeExponent,
  ArityMismatch,
  FieldMismatch,
  ZeroPolynomial,
  DimensionMismatch,
  EmptyInput,
  BudgetExceeded,
  BasePointHit,
  InconsistentD,
  NonpositiveT,
  DimensionTooSmall,
  FitUnderdetermined,
  InvalidScenario,
  DimensionCheckFailed,
};

constexpr std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::DegreeZero: return "DegreeZero";
    case ErrorCode::FieldTooLarge: return "FieldTooLarge";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::GeneratorInPrimeField: return "GeneratorInPrimeField";
    case ErrorCode::NegativeExponent: return "NegativeExponent";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::BasePointHit: return "BasePointHit";
    case ErrorCode::InconsistentD: return "InconsistentD";
    case ErrorCode::NonpositiveT: return "NonpositiveT";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::FitUnderdetermined: return "FitUnderdetermined";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::DimensionCheckFailed: return "DimensionCheckFailed";
  }
  return "Unknown";
}

/// Every failure in the library is reported as an Error carrying a code; the
/// CLI maps codes onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hyperslice
