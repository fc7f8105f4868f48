#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "tempcast/datamodel.hpp"
#include "tempcast/error.hpp"

namespace tempcast {

/// Ordinary least squares fit with an unconditional intercept, plus the
/// usual inference summary. Vectors of length p + 1 list the intercept
/// first.
struct RegressionFit {
  std::vector<std::string> feature_names;
  double intercept = 0.0;
  Eigen::VectorXd coefficients;  // p
  Eigen::VectorXd std_errors;    // p + 1
  Eigen::VectorXd t_stats;       // p + 1
  Eigen::VectorXd p_values;      // p + 1, two-sided
  double r_squared = 0.0;
  double adj_r_squared = 0.0;
  double f_statistic = 0.0;
  double f_pvalue = 1.0;
  double residual_sum_squares = 0.0;
  Eigen::Index n_obs = 0;
  Eigen::Index df_resid = 0;

  Eigen::Index feature_count() const { return coefficients.size(); }
  /// p-value of feature j (0-based, intercept excluded).
  double feature_pvalue(Eigen::Index j) const { return p_values(j + 1); }
};

/// Fits target ~ 1 + features. Requires n_obs >= p + 2; exact collinearity
/// raises kRankDeficient naming the offending feature.
RegressionFit ols_fit(const SupervisedDataset& ds);

/// Raw-matrix form of ols_fit; `names` labels the columns of `features`.
RegressionFit ols_fit(const Eigen::Ref<const Eigen::MatrixXd>& features,
                      const Eigen::Ref<const Eigen::VectorXd>& target, std::vector<std::string> names);

/// intercept + coefficients . x
double predict(const RegressionFit& fit, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Predictions for every row of `features` (columns in fit order).
Eigen::VectorXd predict_rows(const RegressionFit& fit, const Eigen::Ref<const Eigen::MatrixXd>& features);

/// Fixed-width coefficient table plus fit diagnostics, six significant
/// digits throughout. Output depends only on the fit's values.
std::string summarize(const RegressionFit& fit);

/// p-values below this print as zero in summaries.
inline constexpr double kPValueDisplayFloor = 1e-15;

}  // namespace tempcast
