#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ise/dataset.hpp"
#include "ise/family.hpp"
#include "ise/rng.hpp"

namespace ise::test {

inline constexpr std::uint64_t kSeed = 20240611;

/// Intercept row followed by p-1 rows of N(0, sd^2) draws.
inline Eigen::MatrixXd random_design(CounterRng& rng, std::size_t p, std::size_t n, double sd = 1.0) {
  Eigen::MatrixXd x(p, n);
  for (std::size_t i = 0; i < n; ++i) {
    x(0, i) = 1.0;
    for (std::size_t j = 1; j < p; ++j) x(j, i) = sd * rng.normal();
  }
  return x;
}

inline Eigen::VectorXd random_vector(CounterRng& rng, std::size_t p, double sd = 1.0) {
  Eigen::VectorXd v(p);
  for (std::size_t j = 0; j < p; ++j) v(j) = sd * rng.normal();
  return v;
}

inline Dataset random_gaussian(CounterRng& rng, const Eigen::VectorXd& beta, std::size_t n, double sigma = 1.0,
                               double sd = 1.0) {
  const auto p = static_cast<std::size_t>(beta.size());
  Eigen::MatrixXd x = random_design(rng, p, n, sd);
  Eigen::VectorXd y = x.transpose() * beta;
  for (std::size_t i = 0; i < n; ++i) y(i) += sigma * rng.normal();
  return Dataset(std::move(x), std::move(y));
}

inline Dataset random_bernoulli(CounterRng& rng, const Eigen::VectorXd& beta, std::size_t n, double sd = 1.0) {
  const auto p = static_cast<std::size_t>(beta.size());
  Eigen::MatrixXd x = random_design(rng, p, n, sd);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double eta = x.col(i).dot(beta);
    y(i) = rng.uniform() < 1.0 / (1.0 + std::exp(-eta)) ? 1.0 : 0.0;
  }
  return Dataset(std::move(x), std::move(y));
}

/// A A^T / p + 0.1 I with A standard normal.
inline Eigen::MatrixXd random_spd(CounterRng& rng, std::size_t p) {
  Eigen::MatrixXd a(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) a(i, j) = rng.normal();
  return a * a.transpose() / static_cast<double>(p) + 0.1 * Eigen::MatrixXd::Identity(p, p);
}

// Oracles. Written with loops or alternative factorizations on purpose.

inline Eigen::MatrixXd loop_gram(const Eigen::MatrixXd& x) {
  const auto p = x.rows();
  const auto n = x.cols();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index a = 0; a < p; ++a)
      for (Eigen::Index b = 0; b < p; ++b) g(a, b) += x(a, i) * x(b, i);
  return g / static_cast<double>(n);
}

/// Least squares via Householder QR of the n x p regressor matrix.
inline Eigen::VectorXd qr_ols(const Dataset& d) {
  return d.design.transpose().colPivHouseholderQr().solve(d.response);
}

inline double expit(double t) { return 1.0 / (1.0 + std::exp(-t)); }

inline double log1p_exp(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

/// Sum over units of sum_{y in {0,1}} f(y; b1) log(f(y; b1) / f(y; b)).
inline double bernoulli_kl_enumeration(const Eigen::MatrixXd& x, const Eigen::VectorXd& beta1,
                                       const Eigen::VectorXd& beta) {
  double kl = 0.0;
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    const double p1 = expit(x.col(i).dot(beta1));
    const double p = expit(x.col(i).dot(beta));
    kl += p1 * std::log(p1 / p) + (1.0 - p1) * std::log((1.0 - p1) / (1.0 - p));
  }
  return kl;
}

inline Eigen::VectorXd central_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                        const Eigen::VectorXd& x, double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Eigen::VectorXd hi = x, lo = x;
    hi(j) += h;
    lo(j) -= h;
    g(j) = (f(hi) - f(lo)) / (2.0 * h);
  }
  return g;
}

inline Eigen::MatrixXd central_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                        const Eigen::VectorXd& x, double h = 1e-5) {
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd jac(f0.size(), x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Eigen::VectorXd hi = x, lo = x;
    hi(j) += h;
    lo(j) -= h;
    jac.col(j) = (f(hi) - f(lo)) / (2.0 * h);
  }
  return jac;
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

/// Empirical mean of the rows of `draws` (one draw per row).
inline Eigen::VectorXd column_means(const Eigen::MatrixXd& draws) {
  return draws.colwise().mean().transpose();
}

inline Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& draws) {
  const Eigen::MatrixXd c = draws.rowwise() - draws.colwise().mean();
  return c.transpose() * c / static_cast<double>(draws.rows() - 1);
}

}  // namespace ise::test
