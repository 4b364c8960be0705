#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ise/error.hpp"
#include "ise/glm.hpp"
#include "ise/inference.hpp"
#include "ise/shrink.hpp"
#include "test_support.hpp"

using namespace ise;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd inverse(const MatrixXd& m) { return m.fullPivLu().inverse(); }

double phi_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_statistic(std::vector<double> z) {
  std::sort(z.begin(), z.end());
  const double n = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double f = phi_cdf(z[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace

TEST_CASE("normal critical values") {
  CHECK(normal_critical_value(0.95) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_critical_value(0.90) == doctest::Approx(1.6448536269514722).epsilon(1e-12));
  CHECK(normal_critical_value(0.99) == doctest::Approx(2.5758293035489004).epsilon(1e-12));
  CHECK_THROWS_AS(normal_critical_value(0.0), Error);
  CHECK_THROWS_AS(normal_critical_value(1.0), Error);
  CHECK_THROWS_AS(normal_critical_value(-0.5), Error);
}

TEST_CASE("sandwich at lambda zero is the classical covariance") {
  auto rng = CounterRng::stream(test::kSeed, 200);
  const VectorXd beta = test::random_vector(rng, 4);
  const Dataset target = test::random_gaussian(rng, beta, 40, 0.8);
  const SourceSummary source = SourceSummary::from_data(GlmFamily::gaussian(), test::random_gaussian(rng, beta, 60));
  const MleFit fit = fit_mle(GlmFamily::gaussian(), target);
  const PenalizedProblem problem(GlmFamily::gaussian(), target, source);
  const MatrixXd expect = fit.gamma_hat / 40.0 * inverse(fit.gram);
  CHECK(test::max_abs(sandwich_variance(problem, fit, 0.0) - expect) < 1e-12);

  const IntervalSet wald = wald_intervals(GlmFamily::gaussian(), fit, 0.95);
  const DialEstimate est = solve_dial_estimate(GlmFamily::gaussian(), target, fit, source, 0.0);
  const IntervalSet ci = confidence_intervals(est, 0.95);
  CHECK(test::max_abs(ci.lower - wald.lower) < 1e-10);
  CHECK(test::max_abs(ci.upper - wald.upper) < 1e-10);
}

TEST_CASE("sandwich matches the explicit formula for bernoulli") {
  auto rng = CounterRng::stream(test::kSeed, 201);
  VectorXd beta(3);
  beta << 0.2, -0.7, 0.4;
  const Dataset target = test::random_bernoulli(rng, beta, 80);
  const Dataset source = test::random_bernoulli(rng, beta, 120);
  const SourceSummary summary = SourceSummary::from_data(GlmFamily::bernoulli(), source);
  const VectorXd at = beta + test::random_vector(rng, 3, 0.1);
  MatrixXd v2 = MatrixXd::Zero(3, 3), v1 = MatrixXd::Zero(3, 3);
  for (Eigen::Index i = 0; i < 80; ++i) {
    const double m = test::expit(target.design.col(i).dot(at));
    v2 += m * (1 - m) * target.design.col(i) * target.design.col(i).transpose() / 80.0;
  }
  for (Eigen::Index i = 0; i < 120; ++i) {
    const double m = test::expit(source.design.col(i).dot(at));
    v1 += m * (1 - m) * source.design.col(i) * source.design.col(i).transpose() / 120.0;
  }
  for (double lambda : {0.0, 0.5, 2.0}) {
    const MatrixXd si = inverse(v2 + lambda * v1);
    const MatrixXd expect = si * v2 * si / 80.0;
    CHECK(test::max_abs(sandwich_variance(GlmFamily::bernoulli(), target, summary, at, lambda, 1.0) - expect) <
          1e-12);
  }

  const MleFit fit = fit_mle(GlmFamily::bernoulli(), target);
  const DialEstimate est = solve_dial_estimate(GlmFamily::bernoulli(), target, fit, summary, 0.7);
  const PenalizedProblem problem(GlmFamily::bernoulli(), target, summary);
  CHECK(test::max_abs(est.sandwich_var - sandwich_variance(problem, fit, 0.7)) < 1e-14);
}

TEST_CASE("sandwich is Loewner-smaller than the MLE covariance") {
  auto rng = CounterRng::stream(test::kSeed, 202);
  for (int t = 0; t < 30; ++t) {
    const MatrixXd g1 = test::random_spd(rng, 4);
    const MatrixXd x2 = test::random_design(rng, 4, 30);
    const Dataset target(x2, test::random_vector(rng, 30));
    const SourceSummary source = SourceSummary::from_gram(50, test::random_vector(rng, 4), g1, 1.0);
    const MleFit fit = fit_mle(GlmFamily::gaussian(), target);
    const PenalizedProblem problem(GlmFamily::gaussian(), target, source);
    const MatrixXd base = sandwich_variance(problem, fit, 0.0);
    const double lambda = 0.05 + 3.0 * rng.uniform();
    const MatrixXd shrunk = sandwich_variance(problem, fit, lambda);
    CHECK(Eigen::SelfAdjointEigenSolver<MatrixXd>(base - shrunk).eigenvalues().minCoeff() > 0.0);
    const VectorXd lo = Eigen::SelfAdjointEigenSolver<MatrixXd>(shrunk).eigenvalues();
    const VectorXd hi = Eigen::SelfAdjointEigenSolver<MatrixXd>(base).eigenvalues();
    for (int r = 0; r < 4; ++r) CHECK(lo(r) < hi(r));
  }
}

TEST_CASE("interval shape") {
  auto rng = CounterRng::stream(test::kSeed, 203);
  const VectorXd beta = test::random_vector(rng, 3);
  const Dataset target = test::random_gaussian(rng, beta, 30);
  const SourceSummary source = SourceSummary::from_data(GlmFamily::gaussian(), test::random_gaussian(rng, beta, 50));
  const MleFit fit = fit_mle(GlmFamily::gaussian(), target);
  const DialEstimate est = solve_dial_estimate(GlmFamily::gaussian(), target, fit, source, 0.8);
  const IntervalSet ci = confidence_intervals(est, 0.9);
  const IntervalSet wald = wald_intervals(GlmFamily::gaussian(), fit, 0.9);
  CHECK(ci.level == 0.9);
  CHECK(ci.center == est.beta_tilde);
  for (int j = 0; j < 3; ++j) {
    CHECK(ci.lower(j) < ci.upper(j));
    CHECK(ci.upper(j) - ci.center(j) == doctest::Approx(ci.center(j) - ci.lower(j)).epsilon(1e-12));
    CHECK(ci.se(j) == doctest::Approx(std::sqrt(est.sandwich_var(j, j))).epsilon(1e-14));
    CHECK(ci.half_width()(j) == doctest::Approx(normal_critical_value(0.9) * ci.se(j)).epsilon(1e-12));
    CHECK(ci.half_width()(j) <= wald.half_width()(j));
  }
}

TEST_CASE("exact gaussian law of the estimator") {
  auto rng = CounterRng::stream(test::kSeed, 204);
  const std::size_t p = 3, n2 = 30;
  const double sigma = 0.9, lambda = 0.6;
  const MatrixXd x2 = test::random_design(rng, p, n2);
  const MatrixXd g2 = test::loop_gram(x2);
  const MatrixXd g1 = test::random_spd(rng, p);
  const VectorXd beta1 = test::random_vector(rng, p);
  const VectorXd beta2 = beta1 + test::random_vector(rng, p, 0.4);
  const SourceSummary source = SourceSummary::from_gram(60, beta1, g1, 1.0);
  const MatrixXd si = inverse(g2 + lambda * g1);
  const VectorXd mean = beta2 + lambda * si * g1 * (beta1 - beta2);
  const MatrixXd cov = sigma * sigma / n2 * si * g2 * si;
  VectorXd combo(p);
  combo << 0.3, -1.0, 0.6;

  const int reps = 20000;
  std::vector<std::vector<double>> z(p + 1);
  MatrixXd draws(reps, p);
  for (int r = 0; r < reps; ++r) {
    VectorXd y = x2.transpose() * beta2;
    for (std::size_t i = 0; i < n2; ++i) y(static_cast<Eigen::Index>(i)) += sigma * rng.normal();
    const Dataset target(x2, y);
    const VectorXd b = solve_dial_estimate(GlmFamily::gaussian(), target, source, lambda).beta_tilde;
    draws.row(r) = b.transpose();
    for (std::size_t j = 0; j < p; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      z[j].push_back((b(jj) - mean(jj)) / std::sqrt(cov(jj, jj)));
    }
    z[p].push_back(combo.dot(b - mean) / std::sqrt(combo.dot(cov * combo)));
  }
  const double critical = 1.6276 / std::sqrt(double(reps));
  for (const auto& zs : z) CHECK(ks_statistic(zs) < critical);

  // empirical covariance entries within 3 Monte Carlo standard errors
  const MatrixXd emp = test::sample_covariance(draws);
  for (Eigen::Index a = 0; a < static_cast<Eigen::Index>(p); ++a) {
    for (Eigen::Index b = 0; b < static_cast<Eigen::Index>(p); ++b) {
      const double se = std::sqrt((cov(a, a) * cov(b, b) + cov(a, b) * cov(a, b)) / reps);
      CHECK(std::abs(emp(a, b) - cov(a, b)) < 3.0 * se);
    }
  }
}

TEST_CASE("debias identity residual") {
  const MatrixXd eye = MatrixXd::Identity(3, 3);
  CHECK(debias_identity_residual(eye, eye, 1.0) < 1e-15);
  auto rng = CounterRng::stream(test::kSeed, 205);
  for (int t = 0; t < 20; ++t) {
    const MatrixXd g1 = test::random_spd(rng, 5);
    const MatrixXd g2 = test::random_spd(rng, 5);
    CHECK(debias_identity_residual(g1, g2, 0.0) < 1e-14);
    for (double lambda : {0.1, 1.0, 10.0}) CHECK(debias_identity_residual(g1, g2, lambda) < 1e-10);
  }
  CHECK_THROWS_AS(debias_identity_residual(eye, eye, -1.0), Error);
}
