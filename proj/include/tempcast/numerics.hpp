#pragma once

// Dense least squares and the distribution functions behind regression
// p-values. Everything here is templated on the scalar type and works on
// Eigen expressions; nothing allocates beyond the factorization workspace.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tempcast/error.hpp"

namespace tempcast {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Relative threshold on |R_jj| (against the largest diagonal entry) below
/// which a column is declared linearly dependent on its predecessors.
inline constexpr double kRankTolerance = 1e-10;

template <typename Scalar>
struct LeastSquaresSolution {
  Vector<Scalar> coefficients;
  Scalar residual_sum_squares{0};
  Eigen::Index rank{0};
  /// diag((X^T X)^-1), taken from R^-1 so X^T X is never formed.
  Vector<Scalar> xtx_inverse_diagonal;
};

/// Upper-triangular factor of an unpivoted Householder QR, with Q^T applied
/// to a single right-hand side as the factorization proceeds.
template <typename Scalar>
struct HouseholderFactor {
  Matrix<Scalar> r;          // p x p
  Vector<Scalar> qt_rhs;     // n, Q^T y
};

template <typename DerivedX, typename DerivedY>
HouseholderFactor<typename DerivedX::Scalar> householder_factor(const Eigen::MatrixBase<DerivedX>& x,
                                                                const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedX::Scalar;
  Matrix<Scalar> a = x;
  Vector<Scalar> b = y;
  const Eigen::Index n = a.rows();
  const Eigen::Index p = a.cols();

  Vector<Scalar> v(n);
  for (Eigen::Index j = 0; j < p; ++j) {
    const Eigen::Index m = n - j;
    const Scalar norm = a.col(j).tail(m).norm();
    if (norm == Scalar(0)) continue;
    const Scalar head = a(j, j);
    const Scalar alpha = head >= Scalar(0) ? -norm : norm;

    auto vj = v.head(m);
    vj = a.col(j).tail(m);
    vj(0) -= alpha;
    const Scalar vnorm2 = vj.squaredNorm();
    if (vnorm2 == Scalar(0)) continue;

    if (j + 1 < p) {
      auto trailing = a.block(j, j + 1, m, p - j - 1);
      const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> w = (vj.transpose() * trailing) * (Scalar(2) / vnorm2);
      trailing.noalias() -= vj * w;
    }
    b.tail(m) -= vj * (Scalar(2) * vj.dot(b.tail(m)) / vnorm2);

    a(j, j) = alpha;
    a.col(j).tail(m - 1).setZero();
  }

  HouseholderFactor<Scalar> out;
  out.r = a.topRows(p).template triangularView<Eigen::Upper>();
  out.qt_rhs = std::move(b);
  return out;
}

/// Minimizes ||y - X k||^2 through Householder QR. Throws
/// RankDeficientError naming the first dependent column when some
/// |R_jj| < kRankTolerance * max_i |R_ii|.
template <typename DerivedX, typename DerivedY>
LeastSquaresSolution<typename DerivedX::Scalar> lstsq(const Eigen::MatrixBase<DerivedX>& x,
                                                      const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedX::Scalar;
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (p < 1 || n < p) {
    throw Error(ErrorCode::kInsufficientObservations,
                "least squares needs n >= p >= 1, got n=" + std::to_string(n) + ", p=" + std::to_string(p));
  }
  if (y.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "target has " + std::to_string(y.size()) + " entries for " + std::to_string(n) + " rows");
  }
  if (!x.allFinite() || !y.allFinite()) {
    throw Error(ErrorCode::kDomainError, "least squares input contains non-finite values");
  }

  const HouseholderFactor<Scalar> qr = householder_factor(x, y);
  const Vector<Scalar> diag = qr.r.diagonal().cwiseAbs();
  const Scalar largest = diag.maxCoeff();
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!(diag(j) >= Scalar(kRankTolerance) * largest) || largest == Scalar(0)) {
      throw RankDeficientError(j, "column " + std::to_string(j) + " is linearly dependent on earlier columns");
    }
  }

  const auto upper = qr.r.template triangularView<Eigen::Upper>();
  LeastSquaresSolution<Scalar> sol;
  sol.coefficients = upper.solve(qr.qt_rhs.head(p));
  sol.residual_sum_squares = qr.qt_rhs.tail(n - p).squaredNorm();
  sol.rank = p;
  const Matrix<Scalar> r_inv = upper.solve(Matrix<Scalar>::Identity(p, p));
  sol.xtx_inverse_diagonal = r_inv.rowwise().squaredNorm();
  return sol;
}

namespace detail {

// Modified Lentz evaluation of the continued fraction for I_x(a, b);
// converges quickly for x < (a + 1) / (a + b + 2).
template <typename Scalar>
Scalar incomplete_beta_fraction(Scalar a, Scalar b, Scalar x) {
  constexpr int kMaxIterations = 10000;
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar tiny = std::numeric_limits<Scalar>::min() / eps;

  const Scalar qab = a + b;
  const Scalar qap = a + Scalar(1);
  const Scalar qam = a - Scalar(1);
  Scalar c = 1;
  Scalar d = Scalar(1) - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = Scalar(1) / d;
  Scalar h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const Scalar sm = m;
    const Scalar m2 = 2 * sm;
    Scalar aa = sm * (b - sm) * x / ((qam + m2) * (a + m2));
    d = Scalar(1) + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = Scalar(1) + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = Scalar(1) / d;
    h *= d * c;

    aa = -(a + sm) * (qab + sm) * x / ((a + m2) * (qap + m2));
    d = Scalar(1) + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = Scalar(1) + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = Scalar(1) / d;
    const Scalar step = d * c;
    h *= step;
    if (std::abs(step - Scalar(1)) <= eps) break;
  }
  return h;
}

}  // namespace detail

/// Regularized incomplete beta function I_x(a, b).
template <typename Scalar>
Scalar regularized_incomplete_beta(Scalar a, Scalar b, Scalar x) {
  using std::exp;
  using std::lgamma;
  using std::log;
  using std::log1p;
  if (!(a > Scalar(0)) || !(b > Scalar(0)) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::kDomainError, "incomplete beta needs a > 0 and b > 0");
  }
  if (!(x >= Scalar(0) && x <= Scalar(1))) {
    throw Error(ErrorCode::kDomainError, "incomplete beta needs x in [0, 1]");
  }
  if (x == Scalar(0)) return Scalar(0);
  if (x == Scalar(1)) return Scalar(1);

  const Scalar log_front = lgamma(a + b) - lgamma(a) - lgamma(b) + a * log(x) + b * log1p(-x);
  const Scalar front = exp(log_front);
  Scalar value;
  if (x < (a + Scalar(1)) / (a + b + Scalar(2))) {
    value = front * detail::incomplete_beta_fraction(a, b, x) / a;
  } else {
    value = Scalar(1) - front * detail::incomplete_beta_fraction(b, a, Scalar(1) - x) / b;
  }
  return std::clamp(value, Scalar(0), Scalar(1));
}

namespace detail {

inline void check_degrees_of_freedom(long df, const char* what) {
  if (df < 1) throw Error(ErrorCode::kDomainError, std::string(what) + " must be >= 1");
}

}  // namespace detail

/// P(T <= t) for Student's t with `df` degrees of freedom.
template <typename Scalar>
Scalar student_t_cdf(Scalar t, long df) {
  detail::check_degrees_of_freedom(df, "t degrees of freedom");
  if (std::isnan(t)) throw Error(ErrorCode::kDomainError, "t statistic is NaN");
  if (t == Scalar(0)) return Scalar(0.5);
  const Scalar nu = static_cast<Scalar>(df);
  const Scalar lower_tail =
      Scalar(0.5) * regularized_incomplete_beta(nu / Scalar(2), Scalar(0.5), nu / (nu + t * t));
  return t > Scalar(0) ? Scalar(1) - lower_tail : lower_tail;
}

/// P(|T| >= |t|). Evaluated directly from the tail so tiny p-values keep
/// their relative accuracy instead of cancelling in 1 - F.
template <typename Scalar>
Scalar student_t_two_sided_pvalue(Scalar t, long df) {
  detail::check_degrees_of_freedom(df, "t degrees of freedom");
  if (std::isnan(t)) throw Error(ErrorCode::kDomainError, "t statistic is NaN");
  const Scalar nu = static_cast<Scalar>(df);
  return regularized_incomplete_beta(nu / Scalar(2), Scalar(0.5), nu / (nu + t * t));
}

/// CDF of the F(df1, df2) distribution.
template <typename Scalar>
Scalar f_cdf(Scalar x, long df1, long df2) {
  detail::check_degrees_of_freedom(df1, "F numerator degrees of freedom");
  detail::check_degrees_of_freedom(df2, "F denominator degrees of freedom");
  if (!(x >= Scalar(0))) throw Error(ErrorCode::kDomainError, "F statistic must be >= 0");
  if (std::isinf(x)) return Scalar(1);
  const Scalar d1 = static_cast<Scalar>(df1);
  const Scalar d2 = static_cast<Scalar>(df2);
  return regularized_incomplete_beta(d1 / Scalar(2), d2 / Scalar(2), d1 * x / (d1 * x + d2));
}

/// 1 - f_cdf, computed through the complementary incomplete beta.
template <typename Scalar>
Scalar f_survival(Scalar x, long df1, long df2) {
  detail::check_degrees_of_freedom(df1, "F numerator degrees of freedom");
  detail::check_degrees_of_freedom(df2, "F denominator degrees of freedom");
  if (!(x >= Scalar(0))) throw Error(ErrorCode::kDomainError, "F statistic must be >= 0");
  if (std::isinf(x)) return Scalar(0);
  const Scalar d1 = static_cast<Scalar>(df1);
  const Scalar d2 = static_cast<Scalar>(df2);
  return regularized_incomplete_beta(d2 / Scalar(2), d1 / Scalar(2), d2 / (d2 + d1 * x));
}

}  // namespace tempcast
