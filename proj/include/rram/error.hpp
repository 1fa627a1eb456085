#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rram {

// Every domain failure in the library is reported as an Error carrying one of
// these kinds; the CLI prints the kind name next to the message.
enum class ErrorKind {
  ParseError,
  OutOfRange,
  InvalidConfig,
  ArityMismatch,
  DivisionByZero,
  AddressOutOfRange,
  UnsupportedExactRoot,
  FuelExhausted,
  ExecutionError,
  SqrtNotSupportedInShadow,
  TraceMismatch,
  BudgetExceeded,
  UnboundVariable,
  ZeroPolynomial,
  DimensionTooLarge,
  PreconditionViolated,
  DegenerateTarget,
  NonConvexInput,
  OverlappingPieces,
  InvalidInputPacking,
  RotationalPlacementUnsupported,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::AddressOutOfRange: return "AddressOutOfRange";
    case ErrorKind::UnsupportedExactRoot: return "UnsupportedExactRoot";
    case ErrorKind::FuelExhausted: return "FuelExhausted";
    case ErrorKind::ExecutionError: return "ExecutionError";
    case ErrorKind::SqrtNotSupportedInShadow: return "SqrtNotSupportedInShadow";
    case ErrorKind::TraceMismatch: return "TraceMismatch";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::DegenerateTarget: return "DegenerateTarget";
    case ErrorKind::NonConvexInput: return "NonConvexInput";
    case ErrorKind::OverlappingPieces: return "OverlappingPieces";
    case ErrorKind::InvalidInputPacking: return "InvalidInputPacking";
    case ErrorKind::RotationalPlacementUnsupported: return "RotationalPlacementUnsupported";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rram
