#pragma once

#include <cstddef>
#include <variant>

#include <Eigen/Dense>

#include "ise/dataset.hpp"
#include "ise/family.hpp"
#include "ise/glm.hpp"

namespace ise {

/// Individual-level source design. The response is optional and only needed by
/// baselines that refit on pooled data.
struct FullDesign {
  Eigen::MatrixXd design;
  GlmFamily family = GlmFamily::gaussian();
  Eigen::VectorXd response;
};

/// Gaussian-only payload: the scaled Gram matrix n1^-1 X1 X1^T.
struct GaussianGram {
  Eigen::MatrixXd gram;
};

/// What the penalty needs from the source data: n1, beta1_hat, gamma1_hat and
/// either the raw design or a Gram matrix.
struct SourceSummary {
  std::size_t n1 = 0;
  Eigen::VectorXd beta1_hat;
  double gamma1_hat = 1.0;
  std::variant<FullDesign, GaussianGram> payload;
  Eigen::MatrixXd gram;  // G1, cached for both payloads

  static SourceSummary from_data(GlmFamily family, const Dataset& source, const MleFit& fit);
  static SourceSummary from_data(GlmFamily family, const Dataset& source);
  static SourceSummary from_gram(std::size_t n1, Eigen::VectorXd beta1_hat, Eigen::MatrixXd gram,
                                 double sigma2_hat);

  std::size_t p() const { return static_cast<std::size_t>(beta1_hat.size()); }
  bool has_design() const { return std::holds_alternative<FullDesign>(payload); }
  const FullDesign& design() const;  // throws PayloadMismatch for Gram payloads

  /// Throws PayloadMismatch / DimensionMismatch when unusable with `family` and p.
  void check(GlmFamily family, std::size_t p) const;
};

/// Source-side raw KL sum: sum_i b'(t1_i)(t1_i - t_i) + b(t_i) - b(t1_i), with
/// t = X1^T beta and t1 = X1^T beta1_hat. No 1/d(gamma1) factor.
double raw_kl_divergence(GlmFamily family, const SourceSummary& source, const Eigen::VectorXd& beta);

/// KL_{n1}(beta; beta1_hat, gamma1) including the 1/d(gamma1) factor.
double kl_divergence(GlmFamily family, const SourceSummary& source, const Eigen::VectorXd& beta);

/// X1 {h(X1^T beta) - h(X1^T beta1_hat)}; for a Gram payload n1 G1 (beta - beta1_hat).
Eigen::VectorXd source_mean_shift(GlmFamily family, const SourceSummary& source, const Eigen::VectorXd& beta);

/// n1^-1 X1 A(X1^T beta) X1^T; G1 for Gaussian.
Eigen::MatrixXd source_info(GlmFamily family, const SourceSummary& source, const Eigen::VectorXd& beta);

/// Target data paired with a source summary; precomputes the pieces of
/// O, Psi and S that do not depend on beta.
class PenalizedProblem {
 public:
  PenalizedProblem(GlmFamily family, const Dataset& target, const SourceSummary& source);

  double objective(const Eigen::VectorXd& beta, double lambda) const;
  Eigen::VectorXd estimating_function(const Eigen::VectorXd& beta, double lambda) const;
  Eigen::MatrixXd penalized_hessian(const Eigen::VectorXd& beta, double lambda) const;

  GlmFamily family() const { return family_; }
  const Dataset& target() const { return *target_; }
  const SourceSummary& source() const { return *source_; }

 private:
  GlmFamily family_;
  const Dataset* target_;
  const SourceSummary* source_;
  Eigen::VectorXd target_xy_;      // n2^-1 X2 y2
  Eigen::VectorXd source_anchor_;  // n1^-1 X1 mu1(beta1_hat)
};

double objective(GlmFamily family, const Dataset& target, const SourceSummary& source,
                 const Eigen::VectorXd& beta, double lambda);
Eigen::VectorXd estimating_function(GlmFamily family, const Dataset& target, const SourceSummary& source,
                                    const Eigen::VectorXd& beta, double lambda);
Eigen::MatrixXd penalized_hessian(GlmFamily family, const Dataset& target, const SourceSummary& source,
                                  const Eigen::VectorXd& beta, double lambda);

struct DialEstimate {
  Eigen::VectorXd beta_tilde;
  double lambda = 0.0;
  int iterations = 0;
  bool converged = false;
  double psi_norm = 0.0;          // ||Psi(beta_tilde; lambda)||_inf
  Eigen::MatrixXd S_at_solution;  // S(beta_tilde; lambda)
  Eigen::MatrixXd sandwich_var;   // evaluated at the target MLE
};

struct NewtonOptions {
  double tolerance = 1e-10;  // on ||Psi||_inf
  int max_iterations = 100;
  int max_halvings = 30;
};

/// Gaussian: closed form. Otherwise Newton on Psi starting at the target MLE.
DialEstimate solve_dial_estimate(GlmFamily family, const Dataset& target, const MleFit& target_fit,
                                 const SourceSummary& source, double lambda, const NewtonOptions& options = {});
DialEstimate solve_dial_estimate(GlmFamily family, const Dataset& target, const SourceSummary& source,
                                 double lambda, const NewtonOptions& options = {});

/// Always runs the Newton iteration, whatever the family.
DialEstimate newton_dial_estimate(const PenalizedProblem& problem, const MleFit& target_fit, double lambda,
                                  const NewtonOptions& options = {});

/// (G2 + lambda G1)^-1 G2
Eigen::MatrixXd shrink_weight_matrix(const Eigen::MatrixXd& target_gram, const Eigen::MatrixXd& source_gram,
                                     double lambda);

}  // namespace ise
