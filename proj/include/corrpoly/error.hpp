#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace corrpoly {

enum class ErrorCode {
  OutOfRange,
  AsymmetricInput,
  NegativeEntry,
  FortetViolation,
  DimensionMismatch,
  DimensionCap,
  NonSquare,
  NonPositiveRho,
  InvalidCertificate,
  NotLinear,
  BadUniverseSize,
  InvalidInstance,
  NonPositiveBudget,
  NonUnitDiagonal,
  NotForest,
  NotChordal,
  UncoveredEntry,
  ParseError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::AsymmetricInput: return "AsymmetricInput";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::FortetViolation: return "FortetViolation";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DimensionCap: return "DimensionCap";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::NonPositiveRho: return "NonPositiveRho";
    case ErrorCode::InvalidCertificate: return "InvalidCertificate";
    case ErrorCode::NotLinear: return "NotLinear";
    case ErrorCode::BadUniverseSize: return "BadUniverseSize";
    case ErrorCode::InvalidInstance: return "InvalidInstance";
    case ErrorCode::NonPositiveBudget: return "NonPositiveBudget";
    case ErrorCode::NonUnitDiagonal: return "NonUnitDiagonal";
    case ErrorCode::NotForest: return "NotForest";
    case ErrorCode::NotChordal: return "NotChordal";
    case ErrorCode::UncoveredEntry: return "UncoveredEntry";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

// All library failures are reported through this type; code() is the stable part,
// what() carries the human-readable diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace corrpoly
