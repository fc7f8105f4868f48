#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "tempcast/numerics.hpp"

using namespace tempcast;

namespace {

Eigen::MatrixXd line_design() {
  Eigen::MatrixXd x(3, 2);
  x << 1, 0, 1, 1, 1, 2;
  return x;
}

}  // namespace

TEST_CASE("lstsq recovers an exact affine fit") {
  Eigen::VectorXd y(3);
  y << 1, 3, 5;
  const auto sol = lstsq(line_design(), y);
  CHECK(sol.coefficients(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sol.coefficients(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sol.residual_sum_squares == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(sol.rank == 2);
}

TEST_CASE("lstsq matches the closed-form simple regression") {
  // slope = Sxy / Sxx = 1 / 2, intercept = 2/3 - 1/2, RSS = 1/36 + 1/9 + 1/36
  Eigen::VectorXd y(3);
  y << 0, 1, 1;
  const auto sol = lstsq(line_design(), y);
  CHECK(sol.coefficients(0) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  CHECK(sol.coefficients(1) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(sol.residual_sum_squares == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  // (X^T X)^-1 = [[5/6, -1/2], [-1/2, 1/2]]
  CHECK(sol.xtx_inverse_diagonal(0) == doctest::Approx(5.0 / 6.0).epsilon(1e-13));
  CHECK(sol.xtx_inverse_diagonal(1) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("lstsq reports the duplicated column") {
  Eigen::MatrixXd x(4, 3);
  x << 1, 0, 0, 1, 1, 1, 1, 2, 2, 1, 5, 5;
  Eigen::VectorXd y(4);
  y << 1, 2, 3, 4;
  try {
    lstsq(x, y);
    FAIL("expected rank deficiency");
  } catch (const RankDeficientError& e) {
    CHECK(e.code() == ErrorCode::kRankDeficient);
    CHECK(e.column() == 2);
  }
}

TEST_CASE("lstsq rejects bad shapes and values") {
  Eigen::MatrixXd wide(2, 3);
  wide.setOnes();
  CHECK_THROWS_AS(lstsq(wide, Eigen::VectorXd::Ones(2)), Error);
  Eigen::MatrixXd x = line_design();
  CHECK_THROWS_AS(lstsq(x, Eigen::VectorXd::Ones(2)), Error);
  x(1, 1) = NAN;
  CHECK_THROWS_AS(lstsq(x, Eigen::VectorXd::Ones(3)), Error);
}

TEST_CASE("lstsq works in long double") {
  Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> x(3, 2);
  x << 1, 0, 1, 1, 1, 2;
  Eigen::Matrix<long double, Eigen::Dynamic, 1> y(3);
  y << 0, 1, 1;
  const auto sol = lstsq(x, y);
  CHECK(std::abs(sol.coefficients(1) - 0.5L) < 1e-17L);
}

TEST_CASE("lstsq agrees with the normal-equations oracle and leaves orthogonal residuals") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick_p(1, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = pick_p(rng);
    std::uniform_int_distribution<int> pick_n(2 * p + 2, 50);
    const int n = pick_n(rng);
    const Eigen::MatrixXd x = oracle::random_design(rng, n, p);
    const Eigen::VectorXd y = oracle::random_vector(rng, n, 3.0);
    const auto sol = lstsq(x, y);
    const auto ref = oracle::normal_equations(x, y);
    for (int j = 0; j < p; ++j) {
      const double scale = std::max(1.0, std::abs(ref[static_cast<std::size_t>(j)]));
      CHECK(std::abs(sol.coefficients(j) - ref[static_cast<std::size_t>(j)]) <= 1e-8 * scale);
    }
    const Eigen::VectorXd residual = y - x * sol.coefficients;
    CHECK((x.transpose() * residual).cwiseAbs().maxCoeff() <= 1e-8 * y.norm());
    CHECK(sol.residual_sum_squares == doctest::Approx(residual.squaredNorm()).epsilon(1e-9));
  }
}

TEST_CASE("appending a column never increases RSS") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::MatrixXd x = oracle::random_design(rng, 30, 4);
    const Eigen::VectorXd y = oracle::random_vector(rng, 30);
    const double rss_small = lstsq(x.leftCols(3), y).residual_sum_squares;
    const double rss_big = lstsq(x, y).residual_sum_squares;
    CHECK(rss_big <= rss_small * (1.0 + 1e-12) + 1e-12);
  }
}

TEST_CASE("incomplete beta boundary and identity values") {
  CHECK(regularized_incomplete_beta(2.5, 3.0, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(2.5, 3.0, 1.0) == 1.0);
  CHECK(regularized_incomplete_beta(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(regularized_incomplete_beta(2.0, 2.0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  // I_x(a, 1) = x^a and I_x(1, b) = 1 - (1 - x)^b
  CHECK(regularized_incomplete_beta(3.5, 1.0, 0.7) == doctest::Approx(std::pow(0.7, 3.5)).epsilon(1e-12));
  CHECK(regularized_incomplete_beta(1.0, 4.0, 0.2) == doctest::Approx(1.0 - std::pow(0.8, 4.0)).epsilon(1e-12));
  // Both sides of the symmetry switch
  for (double x : {0.05, 0.3, 0.5, 0.7, 0.95}) {
    CHECK(regularized_incomplete_beta(2.0, 5.0, x) + regularized_incomplete_beta(5.0, 2.0, 1.0 - x) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("incomplete beta rejects out-of-domain arguments") {
  CHECK_THROWS_AS(regularized_incomplete_beta(0.0, 1.0, 0.5), Error);
  CHECK_THROWS_AS(regularized_incomplete_beta(1.0, -1.0, 0.5), Error);
  CHECK_THROWS_AS(regularized_incomplete_beta(1.0, 1.0, 1.5), Error);
  CHECK_THROWS_AS(regularized_incomplete_beta(1.0, 1.0, -0.1), Error);
}

TEST_CASE("student t CDF closed forms") {
  CHECK(student_t_cdf(0.0, 1) == 0.5);
  CHECK(student_t_cdf(0.0, 17) == 0.5);
  CHECK(student_t_cdf(1.0, 1) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(student_t_cdf(std::sqrt(2.0), 2) == doctest::Approx(0.5 + std::sqrt(2.0) / 4.0).epsilon(1e-12));
  for (double t : {-3.0, -0.4, 0.9, 2.2}) {
    CHECK(student_t_cdf(t, 1) == doctest::Approx(0.5 + std::atan(t) / std::numbers::pi).epsilon(1e-12));
    CHECK(student_t_cdf(t, 2) == doctest::Approx(0.5 + t / (2.0 * std::sqrt(2.0 + t * t))).epsilon(1e-12));
    CHECK(student_t_cdf(-t, 7) == doctest::Approx(1.0 - student_t_cdf(t, 7)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(student_t_cdf(1.0, 0), Error);
}

TEST_CASE("two-sided p-value keeps precision in the far tail") {
  const double p = student_t_two_sided_pvalue(40.0, 100);
  CHECK(p > 0.0);
  CHECK(p < 1e-60);
  CHECK(student_t_two_sided_pvalue(std::sqrt(3.0), 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(student_t_two_sided_pvalue(INFINITY, 5) == 0.0);
}

TEST_CASE("F CDF values") {
  CHECK(f_cdf(0.0, 3, 9) == 0.0);
  CHECK(f_cdf(1.0, 4, 4) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f_cdf(1.0, 1, 1) == doctest::Approx(0.5).epsilon(1e-12));
  // F(1, d) at t^2 equals P(|T| <= t)
  CHECK(f_cdf(4.0, 1, 6) == doctest::Approx(2.0 * student_t_cdf(2.0, 6) - 1.0).epsilon(1e-12));
  CHECK(f_cdf(2.5, 3, 12) + f_survival(2.5, 3, 12) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK_THROWS_AS(f_cdf(-1.0, 1, 1), Error);
}

TEST_CASE("t and F CDFs are nondecreasing") {
  for (long df : {1L, 2L, 5L, 30L}) {
    double prev_t = 0.0;
    double prev_f = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double t = -10.0 + 0.05 * i;
      const double ft = student_t_cdf(t, df);
      CHECK(ft >= prev_t);
      prev_t = ft;
      const double ff = f_cdf(0.05 * i, df, 7);
      CHECK(ff >= prev_f);
      prev_f = ff;
    }
  }
}

TEST_CASE("t CDF matches quadrature of the density") {
  for (long df : {1L, 2L, 5L, 10L, 30L}) {
    for (int i = 0; i <= 40; ++i) {
      const double t = -5.0 + 0.25 * i;
      CHECK(std::abs(student_t_cdf(t, df) - oracle::t_cdf_by_quadrature(t, static_cast<double>(df))) <= 1e-6);
    }
  }
}
