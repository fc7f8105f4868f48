#include "tempcast/selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace tempcast {

double pearson_r(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "correlation inputs differ in length: " + std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  }
  if (x.size() < 2) throw Error(ErrorCode::kInsufficientObservations, "correlation needs at least 2 points");
  const Eigen::ArrayXd dx = x.array() - x.mean();
  const Eigen::ArrayXd dy = y.array() - y.mean();
  const double sxx = dx.square().sum();
  const double syy = dy.square().sum();
  if (!(sxx > 0.0) || !(syy > 0.0)) throw Error(ErrorCode::kConstantInput, "zero-variance input");
  const double r = (dx * dy).sum() / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

FilterResult correlation_filter(const SupervisedDataset& ds, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidParameters, "correlation threshold must lie in (0, 1)");
  }
  if (ds.size() == 0) throw Error(ErrorCode::kInsufficientObservations, "empty dataset");

  CorrelationReport report;
  report.threshold = threshold;
  const auto p = static_cast<std::size_t>(ds.feature_count());
  std::vector<CorrelationEntry> by_column(p);
  for (std::size_t j = 0; j < p; ++j) {
    auto& entry = by_column[j];
    entry.feature = ds.feature_names[j];
    try {
      entry.r = pearson_r(ds.rows.col(static_cast<Eigen::Index>(j)), ds.target);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kConstantInput) throw;
      entry.constant = true;
      report.constant_features.push_back(entry.feature);
    }
    const bool keep = !entry.constant && std::abs(entry.r) >= threshold;
    (keep ? report.kept : report.dropped).push_back(entry.feature);
  }

  report.entries = by_column;
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const auto& a, const auto& b) { return std::abs(a.r) < std::abs(b.r); });

  if (report.kept.empty()) {
    double best = 0.0;
    for (const auto& e : report.entries) best = std::max(best, std::abs(e.r));
    char buf[160];
    std::snprintf(buf, sizeof buf, "no feature reaches |r| >= %g (largest |r| is %.6f)", threshold, best);
    throw AllFeaturesDroppedError(std::move(report), buf);
  }

  FilterResult out{ds.select_columns(report.kept), std::move(report)};
  return out;
}

EliminationResult backward_eliminate(const SupervisedDataset& ds, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::kInvalidParameters, "alpha must lie in (0, 1)");

  EliminationResult out;
  out.trace.alpha = alpha;
  std::vector<std::string> current = ds.feature_names;
  for (;;) {
    out.fit = ols_fit(ds.select_columns(current));
    if (current.empty()) break;

    Eigen::Index worst = 0;
    for (Eigen::Index j = 1; j < out.fit.feature_count(); ++j) {
      if (out.fit.feature_pvalue(j) > out.fit.feature_pvalue(worst)) worst = j;
    }
    const double worst_p = out.fit.feature_pvalue(worst);
    if (!(worst_p > alpha)) break;

    const auto it = current.begin() + worst;
    out.trace.steps.push_back({*it, worst_p, current.size() - 1});
    current.erase(it);
  }
  out.trace.final_features = std::move(current);
  return out;
}

}  // namespace tempcast
