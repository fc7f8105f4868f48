#include "tempcast/error.hpp"

namespace tempcast {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFileNotFound: return "file-not-found";
    case ErrorCode::kHeaderMissingRequiredColumn: return "header-missing-required-column";
    case ErrorCode::kZeroUsableRows: return "zero-usable-rows";
    case ErrorCode::kTooFewObservations: return "too-few-observations";
    case ErrorCode::kNonMonotonicDates: return "non-monotonic-dates";
    case ErrorCode::kDegenerateSplit: return "degenerate-split";
    case ErrorCode::kRankDeficient: return "rank-deficient";
    case ErrorCode::kDomainError: return "domain-error";
    case ErrorCode::kInsufficientObservations: return "insufficient-observations";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kConstantInput: return "constant-input";
    case ErrorCode::kAllFeaturesDropped: return "all-features-dropped";
    case ErrorCode::kColumnMismatch: return "column-mismatch";
    case ErrorCode::kInvalidParameters: return "invalid-parameters";
    case ErrorCode::kUnwritableDirectory: return "unwritable-directory";
    case ErrorCode::kParseError: return "parse-error";
  }
  return "unknown-error";
}

}  // namespace tempcast
