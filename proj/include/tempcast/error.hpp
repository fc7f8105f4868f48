#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <string_view>

namespace tempcast {

enum class ErrorCode {
  kFileNotFound,
  kHeaderMissingRequiredColumn,
  kZeroUsableRows,
  kTooFewObservations,
  kNonMonotonicDates,
  kDegenerateSplit,
  kRankDeficient,
  kDomainError,
  kInsufficientObservations,
  kDimensionMismatch,
  kConstantInput,
  kAllFeaturesDropped,
  kColumnMismatch,
  kInvalidParameters,
  kUnwritableDirectory,
  kParseError,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure surfaced by the library. The code is
/// stable and machine-checkable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the error-code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

/// Raised by the least-squares layer. `column` is the index (in the matrix
/// handed to the solver) of the first column found to be linearly dependent
/// on its predecessors.
class RankDeficientError : public Error {
 public:
  RankDeficientError(Eigen::Index column, const std::string& message)
      : Error(ErrorCode::kRankDeficient, message), column_(column) {}

  Eigen::Index column() const noexcept { return column_; }

 private:
  Eigen::Index column_;
};

}  // namespace tempcast
