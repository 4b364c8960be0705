#include "ise/glm.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ise/error.hpp"
#include "ise/linalg.hpp"

namespace ise {

Eigen::MatrixXd gram_matrix(const Dataset& data) {
  const double n = static_cast<double>(data.n());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(data.design.rows(), data.design.rows());
  g.selfadjointView<Eigen::Lower>().rankUpdate(data.design, 1.0 / n);
  return g.selfadjointView<Eigen::Lower>();
}

Eigen::MatrixXd weighted_info(GlmFamily family, const Eigen::MatrixXd& design, const Eigen::VectorXd& beta) {
  if (beta.size() != design.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "beta length does not match design rows");
  }
  const double n = static_cast<double>(design.cols());
  if (family.is_gaussian()) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(design.rows(), design.rows());
    g.selfadjointView<Eigen::Lower>().rankUpdate(design, 1.0 / n);
    return g.selfadjointView<Eigen::Lower>();
  }
  const Eigen::VectorXd w = variance_weights(family, design.transpose() * beta);
  const Eigen::MatrixXd xw = design * w.cwiseSqrt().asDiagonal();
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(design.rows(), design.rows());
  v.selfadjointView<Eigen::Lower>().rankUpdate(xw, 1.0 / n);
  return v.selfadjointView<Eigen::Lower>();
}

Eigen::MatrixXd weighted_info(GlmFamily family, const Dataset& data, const Eigen::VectorXd& beta) {
  return weighted_info(family, data.design, beta);
}

double log_likelihood(GlmFamily family, const Dataset& data, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = data.design.transpose() * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    ll += data.response[i] * eta[i] - family.cumulant(eta[i]);
  }
  return ll;
}

Eigen::VectorXd score(GlmFamily family, const Dataset& data, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd mu = link_inverse(family, data.design.transpose() * beta);
  return data.design * (data.response - mu);
}

namespace {

void fill_gaussian(const Dataset& data, MleFit& fit) {
  const Eigen::VectorXd xy = data.design * data.response / static_cast<double>(data.n());
  fit.beta_hat = linalg::spd_solve(fit.gram, xy, "design Gram matrix");
  const Eigen::VectorXd resid = data.response - data.design.transpose() * fit.beta_hat;
  const double dof = static_cast<double>(data.n()) - static_cast<double>(data.p());
  fit.gamma_hat = dof > 0 ? resid.squaredNorm() / dof : 0.0;
  fit.info = fit.gram;
  fit.iterations = 1;
  fit.converged = true;
}

// Units fitted exactly at working precision mean the coefficients are running off to infinity.
Error fit_failure(GlmFamily family, const Dataset& data, const Eigen::VectorXd& beta, const std::string& what) {
  const Eigen::VectorXd mu = link_inverse(family, data.design.transpose() * beta);
  const Eigen::Index exact = ((data.response - mu).array().abs() < 1e-10).count();
  if (exact > 0) {
    return Error(ErrorKind::Separation, what + "; " + std::to_string(exact) +
                                            " units are fitted exactly, the data look separable");
  }
  return Error(ErrorKind::NonConvergence, what);
}

void fill_irls(GlmFamily family, const Dataset& data, const IrlsOptions& opt, MleFit& fit) {
  const Eigen::Index p = data.design.rows();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double ll = log_likelihood(family, data, beta);
  fit.loglik_trace.push_back(ll);

  for (int iter = 1; iter <= opt.max_iterations; ++iter) {
    const Eigen::MatrixXd v = weighted_info(family, data, beta);
    const Eigen::VectorXd grad = score(family, data, beta) / static_cast<double>(data.n());
    Eigen::VectorXd step;
    try {
      step = linalg::spd_solve(v, grad, "IRLS working information");
    } catch (const Error&) {
      if (iter == 1) throw;
      throw Error(ErrorKind::Separation, "IRLS information became singular; the data look separable");
    }

    Eigen::VectorXd next = beta + step;
    double ll_next = log_likelihood(family, data, next);
    // below this predicted gain the log-likelihood cannot resolve the step
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(ll));
    if (grad.dot(step) * static_cast<double>(data.n()) > noise) {
      double scale = 1.0;
      int halvings = 0;
      while (!(ll_next >= ll) && halvings < opt.max_halvings) {
        scale *= 0.5;
        next = beta + scale * step;
        ll_next = log_likelihood(family, data, next);
        ++halvings;
      }
      if (!(ll_next >= ll)) throw fit_failure(family, data, beta, "step halving found no ascent");
    }

    const double change = (next - beta).cwiseAbs().maxCoeff();
    beta = next;
    ll = ll_next;
    fit.loglik_trace.push_back(ll);
    fit.iterations = iter;

    if (beta.cwiseAbs().maxCoeff() > opt.separation_threshold) {
      throw Error(ErrorKind::Separation, "IRLS coefficients diverged past " +
                                             std::to_string(opt.separation_threshold));
    }
    if (change < opt.tolerance) {
      fit.converged = true;
      break;
    }
  }
  if (!fit.converged) {
    throw fit_failure(family, data, beta,
                      "IRLS did not converge in " + std::to_string(opt.max_iterations) + " iterations");
  }
  fit.beta_hat = beta;
  fit.gamma_hat = 1.0;
  fit.info = weighted_info(family, data, beta);
  linalg::cholesky(fit.info, "information at the MLE");
}

}  // namespace

MleFit fit_mle(GlmFamily family, const Dataset& data, const IrlsOptions& options) {
  data.validate(family);
  MleFit fit;
  fit.n = data.n();
  fit.p = data.p();
  fit.gram = gram_matrix(data);
  linalg::cholesky(fit.gram, "design Gram matrix");
  if (family.is_gaussian()) {
    fill_gaussian(data, fit);
  } else {
    fill_irls(family, data, options, fit);
  }
  return fit;
}

}  // namespace ise
