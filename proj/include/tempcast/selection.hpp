#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "tempcast/datamodel.hpp"
#include "tempcast/error.hpp"
#include "tempcast/regression.hpp"

namespace tempcast {

/// Sample Pearson correlation. Throws kConstantInput when either side has
/// zero variance and kDimensionMismatch on unequal lengths.
double pearson_r(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y);

struct CorrelationEntry {
  std::string feature;
  double r = 0.0;
  bool constant = false;  // zero variance: r undefined, filtered as |r| = 0
};

struct CorrelationReport {
  std::vector<CorrelationEntry> entries;  // ascending |r|
  double threshold = 0.0;
  std::vector<std::string> kept;          // source column order
  std::vector<std::string> dropped;       // source column order
  std::vector<std::string> constant_features;
};

/// Thrown when no feature reaches the threshold. Carries the full report so
/// callers can show what was computed.
class AllFeaturesDroppedError : public Error {
 public:
  AllFeaturesDroppedError(CorrelationReport report, const std::string& message)
      : Error(ErrorCode::kAllFeaturesDropped, message), report_(std::move(report)) {}

  const CorrelationReport& report() const noexcept { return report_; }

 private:
  CorrelationReport report_;
};

struct FilterResult {
  SupervisedDataset dataset;
  CorrelationReport report;
};

/// Keeps the columns with |r(feature, target)| >= threshold, preserving
/// their order.
FilterResult correlation_filter(const SupervisedDataset& ds, double threshold);

struct EliminationStep {
  std::string removed_feature;
  double p_value = 0.0;
  std::size_t surviving_count = 0;
};

struct EliminationTrace {
  std::vector<EliminationStep> steps;
  std::vector<std::string> final_features;
  double alpha = 0.05;
};

struct EliminationResult {
  RegressionFit fit;
  EliminationTrace trace;
};

/// Repeatedly drops the feature with the largest p-value while that p-value
/// exceeds alpha, refitting from scratch each time. Ties go to the lowest
/// column index. The intercept is never removed. Sequential by nature.
EliminationResult backward_eliminate(const SupervisedDataset& ds, double alpha);

}  // namespace tempcast
