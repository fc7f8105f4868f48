#include "tempcast/regression.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "tempcast/error.hpp"
#include "tempcast/numerics.hpp"

namespace tempcast {

RegressionFit ols_fit(const SupervisedDataset& ds) { return ols_fit(ds.rows, ds.target, ds.feature_names); }

RegressionFit ols_fit(const Eigen::Ref<const Eigen::MatrixXd>& features, const Eigen::Ref<const Eigen::VectorXd>& target,
                      std::vector<std::string> names) {
  const Eigen::Index n = features.rows();
  const Eigen::Index p = features.cols();
  if (static_cast<Eigen::Index>(names.size()) != p) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(names.size()) + " names for " + std::to_string(p) + " feature columns");
  }
  if (target.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "target has " + std::to_string(target.size()) + " entries for " + std::to_string(n) + " rows");
  }
  if (n < p + 2) {
    throw Error(ErrorCode::kInsufficientObservations, std::to_string(n) + " observations for " + std::to_string(p) +
                                                          " features; need at least " + std::to_string(p + 2));
  }

  Eigen::MatrixXd design(n, p + 1);
  design.col(0).setOnes();
  design.rightCols(p) = features;

  LeastSquaresSolution<double> sol;
  try {
    sol = lstsq(design, target);
  } catch (const RankDeficientError& e) {
    const Eigen::Index feature = e.column() - 1;
    const std::string label = feature >= 0 ? names[static_cast<std::size_t>(feature)] : std::string("intercept");
    throw RankDeficientError(feature, "feature '" + label + "' is collinear with the intercept or earlier features");
  }

  RegressionFit fit;
  fit.feature_names = std::move(names);
  fit.n_obs = n;
  fit.df_resid = n - p - 1;
  fit.intercept = sol.coefficients(0);
  fit.coefficients = sol.coefficients.tail(p);
  fit.residual_sum_squares = sol.residual_sum_squares;

  const double sigma2 = sol.residual_sum_squares / static_cast<double>(fit.df_resid);
  fit.std_errors = (sigma2 * sol.xtx_inverse_diagonal.array()).sqrt().matrix();
  fit.t_stats.resize(p + 1);
  fit.p_values.resize(p + 1);
  for (Eigen::Index i = 0; i <= p; ++i) {
    const double coef = sol.coefficients(i);
    const double se = fit.std_errors(i);
    double t;
    if (se > 0.0) {
      t = coef / se;
    } else if (coef == 0.0) {
      t = 0.0;
    } else {
      // Exact fit: zero residual variance, any nonzero coefficient is
      // infinitely significant.
      t = std::copysign(std::numeric_limits<double>::infinity(), coef);
    }
    fit.t_stats(i) = t;
    fit.p_values(i) = student_t_two_sided_pvalue(t, static_cast<long>(fit.df_resid));
  }

  const double tss = (target.array() - target.mean()).matrix().squaredNorm();
  fit.r_squared = tss > 0.0 ? std::min(1.0, 1.0 - sol.residual_sum_squares / tss) : 1.0;
  fit.adj_r_squared =
      1.0 - (1.0 - fit.r_squared) * static_cast<double>(n - 1) / static_cast<double>(fit.df_resid);
  if (p == 0) {
    fit.f_statistic = 0.0;
    fit.f_pvalue = 1.0;
  } else {
    const double explained = fit.r_squared / static_cast<double>(p);
    const double unexplained = (1.0 - fit.r_squared) / static_cast<double>(fit.df_resid);
    fit.f_statistic = unexplained > 0.0 ? std::max(0.0, explained / unexplained)
                                        : std::numeric_limits<double>::infinity();
    fit.f_pvalue = f_survival(fit.f_statistic, static_cast<long>(p), static_cast<long>(fit.df_resid));
  }
  return fit;
}

double predict(const RegressionFit& fit, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != fit.coefficients.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "input has " + std::to_string(x.size()) + " values, model expects " +
                                                   std::to_string(fit.coefficients.size()));
  }
  return fit.intercept + fit.coefficients.dot(x);
}

Eigen::VectorXd predict_rows(const RegressionFit& fit, const Eigen::Ref<const Eigen::MatrixXd>& features) {
  if (features.cols() != fit.coefficients.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "input has " + std::to_string(features.cols()) +
                                                   " columns, model expects " +
                                                   std::to_string(fit.coefficients.size()));
  }
  return (features * fit.coefficients).array() + fit.intercept;
}

namespace {

std::string sig6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%#.6g", v);
  return buf;
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string summarize(const RegressionFit& fit) {
  constexpr std::size_t kNum = 14;
  std::size_t name_width = 9;
  for (const auto& name : fit.feature_names) name_width = std::max(name_width, name.size() + 2);
  const std::size_t total = name_width + 4 * kNum;
  const std::string heavy(total, '=');
  const std::string light(total, '-');

  std::string out;
  out += "OLS regression results: " + std::string(kTargetName) + "\n";
  out += heavy + "\n";
  out += pad_right("term", name_width) + pad_left("coef", kNum) + pad_left("std err", kNum) + pad_left("t", kNum) +
         pad_left("P>|t|", kNum) + "\n";
  out += light + "\n";
  for (Eigen::Index i = 0; i <= fit.feature_count(); ++i) {
    const std::string name = i == 0 ? "intercept" : fit.feature_names[static_cast<std::size_t>(i - 1)];
    const double coef = i == 0 ? fit.intercept : fit.coefficients(i - 1);
    const double p = fit.p_values(i) < kPValueDisplayFloor ? 0.0 : fit.p_values(i);
    out += pad_right(name, name_width) + pad_left(sig6(coef), kNum) + pad_left(sig6(fit.std_errors(i)), kNum) +
           pad_left(sig6(fit.t_stats(i)), kNum) + pad_left(sig6(p), kNum) + "\n";
  }
  out += heavy + "\n";
  const double f_p = fit.f_pvalue < kPValueDisplayFloor ? 0.0 : fit.f_pvalue;
  out += pad_right("No. observations:", 22) + pad_left(std::to_string(fit.n_obs), 12) + "    " +
         pad_right("Df residuals:", 22) + pad_left(std::to_string(fit.df_resid), 12) + "\n";
  out += pad_right("R-squared:", 22) + pad_left(sig6(fit.r_squared), 12) + "    " + pad_right("Adj. R-squared:", 22) +
         pad_left(sig6(fit.adj_r_squared), 12) + "\n";
  out += pad_right("F-statistic:", 22) + pad_left(sig6(fit.f_statistic), 12) + "    " +
         pad_right("Prob (F-statistic):", 22) + pad_left(sig6(f_p), 12) + "\n";
  return out;
}

}  // namespace tempcast
