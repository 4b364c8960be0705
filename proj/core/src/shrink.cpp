#include "ise/shrink.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "ise/error.hpp"
#include "ise/inference.hpp"
#include "ise/linalg.hpp"

namespace ise {

SourceSummary SourceSummary::from_data(GlmFamily family, const Dataset& source, const MleFit& fit) {
  SourceSummary s;
  s.n1 = source.n();
  s.beta1_hat = fit.beta_hat;
  s.gamma1_hat = fit.gamma_hat;
  s.payload = FullDesign{source.design, family, source.response};
  s.gram = fit.gram;
  return s;
}

SourceSummary SourceSummary::from_data(GlmFamily family, const Dataset& source) {
  return from_data(family, source, fit_mle(family, source));
}

SourceSummary SourceSummary::from_gram(std::size_t n1, Eigen::VectorXd beta1_hat, Eigen::MatrixXd gram,
                                       double sigma2_hat) {
  if (gram.rows() != gram.cols() || gram.rows() != beta1_hat.size()) {
    throw Error(ErrorKind::DimensionMismatch, "Gram matrix and beta1_hat disagree on p");
  }
  if (n1 == 0) throw Error(ErrorKind::Validation, "source summary needs n1 > 0");
  linalg::cholesky(gram, "source Gram matrix");
  SourceSummary s;
  s.n1 = n1;
  s.beta1_hat = std::move(beta1_hat);
  s.gamma1_hat = sigma2_hat;
  s.gram = linalg::symmetrize(gram);
  s.payload = GaussianGram{s.gram};
  return s;
}

const FullDesign& SourceSummary::design() const {
  if (const auto* full = std::get_if<FullDesign>(&payload)) return *full;
  throw Error(ErrorKind::PayloadMismatch, "operation needs the individual-level source design");
}

void SourceSummary::check(GlmFamily family, std::size_t p_target) const {
  if (p() != p_target) {
    throw Error(ErrorKind::DimensionMismatch, "source has p=" + std::to_string(p()) + " but target has p=" +
                                                  std::to_string(p_target));
  }
  if (!family.is_gaussian() && !has_design()) {
    throw Error(ErrorKind::PayloadMismatch,
                std::string("a Gram-matrix source summary is only usable with the gaussian family, not ") +
                    std::string(family.name()));
  }
  if (has_design() && !(design().family == family)) {
    throw Error(ErrorKind::PayloadMismatch, "source was fitted with a different family");
  }
}

double raw_kl_divergence(GlmFamily family, const SourceSummary& source, const Eigen::VectorXd& beta) {
  source.check(family, static_cast<std::size_t>(beta.size()));
  if (!source.has_design()) {
    const Eigen::VectorXd d = source.beta1_hat - beta;
    return 0.5 * static_cast<double>(source.n1) * d.dot(source.gram * d);
  }
  const Eigen::MatrixXd& x1 = source.design().design;
  const Eigen::VectorXd t = x1.transpose() * beta;
  const Eigen::VectorXd t1 = x1.transpose() * source.beta1_hat;
  double kl = 0.0;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    kl += family.mean(t1[i]) * (t1[i] - t[i]) + family.cumulant(t[i]) - family.cumulant(t1[i]);
  }
  return std::max(kl, 0.0);
}

double kl_divergence(GlmFamily family, const SourceSummary& source, const Eigen::VectorXd& beta) {
  return raw_kl_divergence(family, source, beta) / family.dispersion(source.gamma1_hat);
}

Eigen::VectorXd source_mean_shift(GlmFamily family, const SourceSummary& source, const Eigen::VectorXd& beta) {
  source.check(family, static_cast<std::size_t>(beta.size()));
  if (!source.has_design()) {
    return static_cast<double>(source.n1) * (source.gram * (beta - source.beta1_hat));
  }
  const Eigen::MatrixXd& x1 = source.design().design;
  const Eigen::VectorXd mu = link_inverse(family, x1.transpose() * beta);
  const Eigen::VectorXd mu1 = link_inverse(family, x1.transpose() * source.beta1_hat);
  return x1 * (mu - mu1);
}

Eigen::MatrixXd source_info(GlmFamily family, const SourceSummary& source, const Eigen::VectorXd& beta) {
  source.check(family, static_cast<std::size_t>(beta.size()));
  if (family.is_gaussian()) return source.gram;
  return weighted_info(family, source.design().design, beta);
}

PenalizedProblem::PenalizedProblem(GlmFamily family, const Dataset& target, const SourceSummary& source)
    : family_(family), target_(&target), source_(&source) {
  source.check(family, target.p());
  target_xy_ = target.design * target.response / static_cast<double>(target.n());
  if (source.has_design()) {
    const Eigen::MatrixXd& x1 = source.design().design;
    source_anchor_ = x1 * link_inverse(family, x1.transpose() * source.beta1_hat) /
                     static_cast<double>(source.n1);
  }
}

namespace {

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::Validation, "lambda must be a finite nonnegative number");
  }
}

}  // namespace

double PenalizedProblem::objective(const Eigen::VectorXd& beta, double lambda) const {
  check_lambda(lambda);
  const double target_term = log_likelihood(family_, *target_, beta) / static_cast<double>(target_->n());
  if (lambda == 0.0) return target_term;
  return target_term - lambda / static_cast<double>(source_->n1) * raw_kl_divergence(family_, *source_, beta);
}

Eigen::VectorXd PenalizedProblem::estimating_function(const Eigen::VectorXd& beta, double lambda) const {
  check_lambda(lambda);
  const Eigen::MatrixXd& x2 = target_->design;
  Eigen::VectorXd psi =
      target_xy_ - x2 * link_inverse(family_, x2.transpose() * beta) / static_cast<double>(target_->n());
  if (lambda == 0.0) return psi;
  if (source_->has_design()) {
    const Eigen::MatrixXd& x1 = source_->design().design;
    const Eigen::VectorXd pull =
        x1 * link_inverse(family_, x1.transpose() * beta) / static_cast<double>(source_->n1) - source_anchor_;
    psi -= lambda * pull;
  } else {
    psi -= lambda * (source_->gram * (beta - source_->beta1_hat));
  }
  return psi;
}

Eigen::MatrixXd PenalizedProblem::penalized_hessian(const Eigen::VectorXd& beta, double lambda) const {
  check_lambda(lambda);
  Eigen::MatrixXd s = weighted_info(family_, *target_, beta);
  if (lambda > 0.0) s += lambda * source_info(family_, *source_, beta);
  return s;
}

double objective(GlmFamily family, const Dataset& target, const SourceSummary& source,
                 const Eigen::VectorXd& beta, double lambda) {
  return PenalizedProblem(family, target, source).objective(beta, lambda);
}

Eigen::VectorXd estimating_function(GlmFamily family, const Dataset& target, const SourceSummary& source,
                                    const Eigen::VectorXd& beta, double lambda) {
  return PenalizedProblem(family, target, source).estimating_function(beta, lambda);
}

Eigen::MatrixXd penalized_hessian(GlmFamily family, const Dataset& target, const SourceSummary& source,
                                  const Eigen::VectorXd& beta, double lambda) {
  return PenalizedProblem(family, target, source).penalized_hessian(beta, lambda);
}

DialEstimate newton_dial_estimate(const PenalizedProblem& problem, const MleFit& target_fit, double lambda,
                                  const NewtonOptions& options) {
  check_lambda(lambda);
  DialEstimate est;
  est.lambda = lambda;
  Eigen::VectorXd beta = target_fit.beta_hat;
  Eigen::VectorXd psi = problem.estimating_function(beta, lambda);
  double norm = psi.cwiseAbs().maxCoeff();

  int iter = 0;
  while (norm >= options.tolerance && iter < options.max_iterations) {
    ++iter;
    const Eigen::MatrixXd s = problem.penalized_hessian(beta, lambda);
    const Eigen::VectorXd step = linalg::spd_solve(s, psi, "penalized Hessian");
    double scale = 1.0;
    Eigen::VectorXd next = beta + step;
    Eigen::VectorXd psi_next = problem.estimating_function(next, lambda);
    double norm_next = psi_next.cwiseAbs().maxCoeff();
    int halvings = 0;
    while (!(norm_next <= norm) && halvings < options.max_halvings) {
      scale *= 0.5;
      next = beta + scale * step;
      psi_next = problem.estimating_function(next, lambda);
      norm_next = psi_next.cwiseAbs().maxCoeff();
      ++halvings;
    }
    if (!(norm_next <= norm)) break;  // stalled at round-off
    const bool moved = next != beta;
    beta = std::move(next);
    psi = std::move(psi_next);
    norm = norm_next;
    if (!moved) break;
  }

  est.beta_tilde = beta;
  est.iterations = iter;
  est.psi_norm = norm;
  est.converged = norm < options.tolerance;
  if (!est.converged) {
    throw Error(ErrorKind::NonConvergence, "Newton iteration for the dial estimate stopped at ||Psi||_inf = " +
                                               std::to_string(norm) + " after " + std::to_string(iter) +
                                               " iterations");
  }
  est.S_at_solution = problem.penalized_hessian(beta, lambda);
  est.sandwich_var = sandwich_variance(problem, target_fit, lambda);
  return est;
}

DialEstimate solve_dial_estimate(GlmFamily family, const Dataset& target, const MleFit& target_fit,
                                 const SourceSummary& source, double lambda, const NewtonOptions& options) {
  check_lambda(lambda);
  const PenalizedProblem problem(family, target, source);
  if (!family.is_gaussian()) return newton_dial_estimate(problem, target_fit, lambda, options);

  DialEstimate est;
  est.lambda = lambda;
  est.S_at_solution = target_fit.gram + lambda * source.gram;
  const Eigen::VectorXd pull = source.gram * (source.beta1_hat - target_fit.beta_hat);
  est.beta_tilde = target_fit.beta_hat + lambda * linalg::spd_solve(est.S_at_solution, pull, "S(lambda)");
  est.converged = true;
  est.psi_norm = problem.estimating_function(est.beta_tilde, lambda).cwiseAbs().maxCoeff();
  est.sandwich_var = sandwich_variance(problem, target_fit, lambda);
  return est;
}

DialEstimate solve_dial_estimate(GlmFamily family, const Dataset& target, const SourceSummary& source,
                                 double lambda, const NewtonOptions& options) {
  return solve_dial_estimate(family, target, fit_mle(family, target), source, lambda, options);
}

Eigen::MatrixXd shrink_weight_matrix(const Eigen::MatrixXd& target_gram, const Eigen::MatrixXd& source_gram,
                                     double lambda) {
  check_lambda(lambda);
  return linalg::spd_solve(target_gram + lambda * source_gram, target_gram, "S(lambda)");
}

}  // namespace ise
