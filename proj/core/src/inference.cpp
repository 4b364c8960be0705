#include "ise/inference.hpp"

#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "ise/error.hpp"
#include "ise/linalg.hpp"

namespace ise {

namespace {

Eigen::MatrixXd sandwich(const Eigen::MatrixXd& s, const Eigen::MatrixXd& v2, double dispersion, double n2) {
  const auto llt = linalg::cholesky(s, "S(beta; lambda)");
  const Eigen::MatrixXd s_inv_v2 = llt.solve(v2);
  const Eigen::MatrixXd out = llt.solve(s_inv_v2.transpose());
  return linalg::symmetrize(out) * (dispersion / n2);
}

IntervalSet make_intervals(const Eigen::VectorXd& center, const Eigen::MatrixXd& cov, double level) {
  const double z = normal_critical_value(level);
  IntervalSet out;
  out.level = level;
  out.center = center;
  out.se = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  out.lower = center - z * out.se;
  out.upper = center + z * out.se;
  return out;
}

}  // namespace

Eigen::MatrixXd sandwich_variance(GlmFamily family, const Dataset& target, const SourceSummary& source,
                                  const Eigen::VectorXd& beta, double lambda, double dispersion) {
  const PenalizedProblem problem(family, target, source);
  const Eigen::MatrixXd v2 = weighted_info(family, target, beta);
  return sandwich(problem.penalized_hessian(beta, lambda), v2, dispersion, static_cast<double>(target.n()));
}

Eigen::MatrixXd sandwich_variance(const PenalizedProblem& problem, const MleFit& target_fit, double lambda) {
  Eigen::MatrixXd s = target_fit.info;
  if (lambda > 0.0) s += lambda * source_info(problem.family(), problem.source(), target_fit.beta_hat);
  return sandwich(s, target_fit.info, problem.family().dispersion(target_fit.gamma_hat),
                  static_cast<double>(target_fit.n));
}

double normal_critical_value(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorKind::Validation, "confidence level must lie in (0, 1)");
  }
  return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + 0.5 * level);
}

IntervalSet confidence_intervals(const DialEstimate& estimate, double level) {
  return make_intervals(estimate.beta_tilde, estimate.sandwich_var, level);
}

IntervalSet wald_intervals(GlmFamily family, const MleFit& fit, double level) {
  const Eigen::MatrixXd cov = linalg::spd_inverse(fit.info, "information at the MLE") *
                              (family.dispersion(fit.gamma_hat) / static_cast<double>(fit.n));
  return make_intervals(fit.beta_hat, cov, level);
}

double debias_identity_residual(const Eigen::MatrixXd& G1, const Eigen::MatrixXd& G2, double lambda) {
  if (!(lambda >= 0.0)) throw Error(ErrorKind::Validation, "lambda must be nonnegative");
  const Eigen::Index p = G1.rows();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(p, p);
  const auto llt = linalg::cholesky(G2 + lambda * G1, "S(lambda)");
  const Eigen::MatrixXd inner = eye - lambda * llt.solve(G1);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(inner);
  if (!lu.isInvertible()) {
    throw Error(ErrorKind::RankDeficient, "I - lambda S^-1 G1 is singular");
  }
  return linalg::inf_norm(lu.solve(llt.solve(G2)) - eye);
}

}  // namespace ise
