#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ise/dataset.hpp"
#include "ise/family.hpp"

namespace ise {

struct IrlsOptions {
  double tolerance = 1e-10;         // on the infinity norm of the step
  int max_iterations = 100;
  int max_halvings = 30;
  double separation_threshold = 1e6;
};

struct MleFit {
  Eigen::VectorXd beta_hat;
  double gamma_hat = 1.0;  // sigma^2 (divisor n - p) for Gaussian, 1 for Bernoulli
  Eigen::MatrixXd info;    // n^-1 X A(X^T beta_hat) X^T
  Eigen::MatrixXd gram;    // n^-1 X X^T
  std::size_t n = 0;
  std::size_t p = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> loglik_trace;  // one entry per accepted IRLS iterate, starting at beta = 0
};

/// n^-1 X X^T
Eigen::MatrixXd gram_matrix(const Dataset& data);

/// n^-1 X A(X^T beta) X^T with A = diag(b''(X_i^T beta)).
Eigen::MatrixXd weighted_info(GlmFamily family, const Dataset& data, const Eigen::VectorXd& beta);
Eigen::MatrixXd weighted_info(GlmFamily family, const Eigen::MatrixXd& design, const Eigen::VectorXd& beta);

/// sum_i { y_i X_i^T beta - b(X_i^T beta) }, the log-likelihood kernel without dispersion.
double log_likelihood(GlmFamily family, const Dataset& data, const Eigen::VectorXd& beta);

/// X (y - mu(beta))
Eigen::VectorXd score(GlmFamily family, const Dataset& data, const Eigen::VectorXd& beta);

MleFit fit_mle(GlmFamily family, const Dataset& data, const IrlsOptions& options = {});

}  // namespace ise
