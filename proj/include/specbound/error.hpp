#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace specbound {

enum class ErrorCode {
  NonSquare,
  NonFiniteEntry,
  NegativeEntry,
  NotSymmetric,
  NotPSD,
  NoConvergence,
  DimensionMismatch,
  BadIndexSet,
  IndexOutOfRange,
  InvalidMap,
  TooSmall,
  RangeViolation,
  BadHeader,
  DuplicateEntry,
  Ragged,
  BadNumber,
  BadSpec,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadIndexSet: return "BadIndexSet";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidMap: return "InvalidMap";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::DuplicateEntry: return "DuplicateEntry";
    case ErrorCode::Ragged: return "Ragged";
    case ErrorCode::BadNumber: return "BadNumber";
    case ErrorCode::BadSpec: return "BadSpec";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace specbound
