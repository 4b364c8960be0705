#include "ise/dial_select.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "ise/error.hpp"
#include "ise/linalg.hpp"

namespace ise {

namespace {

double finite_or_inf(double v) {
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

MseCurve select_lambda(const std::function<double(double)>& curve, LambdaBracket bracket,
                       const SelectOptions& options) {
  const double lo = std::max(bracket.lo, 1e-8);
  const double hi = bracket.hi;
  if (!(hi > lo) || options.grid_points < 2) {
    throw Error(ErrorKind::Validation, "lambda bracket must satisfy max(lo, 1e-8) < hi");
  }
  MseCurve out;
  const int k = options.grid_points;
  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);
  out.lambda_grid.resize(static_cast<std::size_t>(k));
  out.mse_values.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const double lam = i == k - 1 ? hi : std::exp(log_lo + (log_hi - log_lo) * i / (k - 1));
    out.lambda_grid[static_cast<std::size_t>(i)] = i == 0 ? lo : lam;
    out.mse_values[static_cast<std::size_t>(i)] = finite_or_inf(curve(out.lambda_grid[static_cast<std::size_t>(i)]));
  }
  out.at_zero = curve(0.0);

  const auto best_it = std::min_element(out.mse_values.begin(), out.mse_values.end());
  const auto best = static_cast<std::size_t>(best_it - out.mse_values.begin());
  out.lambda_tilde = out.lambda_grid[best];
  out.mse_at_tilde = *best_it;

  double a = std::log(out.lambda_grid[best == 0 ? 0 : best - 1]);
  double b = std::log(out.lambda_grid[std::min(best + 1, out.lambda_grid.size() - 1)]);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double t) { return finite_or_inf(curve(std::exp(t))); };
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > options.rel_tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double refined = std::exp(0.5 * (a + b));
  const double refined_value = finite_or_inf(curve(refined));
  if (refined_value < out.mse_at_tilde) {
    out.lambda_tilde = refined;
    out.mse_at_tilde = refined_value;
  }
  return out;
}

Eigen::MatrixXd delta_sq_hat(const Eigen::VectorXd& delta_p, double sigma2, double n2, const Eigen::MatrixXd& G2) {
  const Eigen::MatrixXd outer = delta_p * delta_p.transpose();
  if (sigma2 == 0.0) return outer;
  const Eigen::MatrixXd raw = outer - (sigma2 / n2) * linalg::spd_inverse(G2, "target Gram matrix");
  const linalg::SymEigen es = linalg::sym_eigen(raw);
  if (es.values.maxCoeff() < 0.0) return outer;
  if (es.values.minCoeff() >= 0.0) return raw;
  const Eigen::VectorXd clipped = es.values.cwiseMax(0.0);
  const Eigen::MatrixXd out = es.vectors * clipped.asDiagonal() * es.vectors.transpose();
  return 0.5 * (out + out.transpose());
}

Eigen::MatrixXd delta_sq_hat(const MleFit& target_fit, const SourceSummary& source) {
  return delta_sq_hat(target_fit.beta_hat - source.beta1_hat, target_fit.gamma_hat,
                      static_cast<double>(target_fit.n), target_fit.gram);
}

GaussianMseCurve::GaussianMseCurve(const MleFit& target_fit, const SourceSummary& source)
    : GaussianMseCurve(source.gram, target_fit.gram, target_fit.gamma_hat, static_cast<double>(target_fit.n),
                       delta_sq_hat(target_fit, source)) {}

GaussianMseCurve::GaussianMseCurve(Eigen::MatrixXd G1, Eigen::MatrixXd G2, double sigma2, double n2,
                                   Eigen::MatrixXd delta_sq)
    : g1_(std::move(G1)), g2_(std::move(G2)), delta_sq_(std::move(delta_sq)), sigma2_(sigma2), n2_(n2) {}

double GaussianMseCurve::operator()(double lambda) const {
  const auto llt = linalg::cholesky(g2_ + lambda * g1_, "S(lambda)");
  const Eigen::MatrixXd s_inv_g2 = llt.solve(g2_);
  const double variance = sigma2_ / n2_ * llt.solve(s_inv_g2.transpose()).trace();
  if (lambda == 0.0) return variance;
  const Eigen::MatrixXd m = llt.solve(g1_);  // S^-1 G1
  const double bias = lambda * lambda * (m * delta_sq_ * m.transpose()).trace();
  return variance + bias;
}

double estimated_mse_gaussian(const MleFit& target_fit, const SourceSummary& source, double lambda) {
  return GaussianMseCurve(target_fit, source)(lambda);
}

GlmAmseCurve::GlmAmseCurve(GlmFamily family, const MleFit& target_fit, const SourceSummary& source)
    : v2_(target_fit.info),
      v1_(source_info(family, source, target_fit.beta_hat)),
      shift_(source_mean_shift(family, source, target_fit.beta_hat)),
      dispersion_(family.dispersion(target_fit.gamma_hat)),
      n1_(static_cast<double>(source.n1)),
      n2_(static_cast<double>(target_fit.n)) {}

double GlmAmseCurve::operator()(double lambda) const {
  const auto llt = linalg::cholesky(v2_ + lambda * v1_, "S(beta; lambda)");
  const Eigen::MatrixXd s_inv_v2 = llt.solve(v2_);
  const double variance = dispersion_ * llt.solve(s_inv_v2.transpose()).trace();
  if (lambda == 0.0) return variance;
  const double bias = n2_ / (n1_ * n1_) * lambda * lambda * llt.solve(shift_).squaredNorm();
  return variance + bias;
}

double estimated_amse_glm(GlmFamily family, const Dataset& target, const MleFit& target_fit,
                          const SourceSummary& source, double lambda) {
  source.design();
  source.check(family, target.p());
  return GlmAmseCurve(family, target_fit, source)(lambda);
}

namespace {

double eigen_ratio(const Eigen::MatrixXd& inner, const Eigen::MatrixXd& outer) {
  // min_r kappa_r / g_r with g ascending (eig of inner) and kappa descending
  const Eigen::VectorXd g = linalg::sym_eigen(inner).values;
  const Eigen::MatrixXd root = linalg::sym_sqrt(inner);
  const Eigen::MatrixXd k = root * linalg::spd_inverse(outer, "source information") * root;
  const Eigen::VectorXd kappa = linalg::sym_eigen(k).values.reverse();
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < g.size(); ++r) best = std::min(best, kappa[r] / g[r]);
  return best;
}

}  // namespace

double lambda_bound_gaussian(const Eigen::MatrixXd& G1, const Eigen::MatrixXd& G2, const Eigen::VectorXd& delta,
                             double sigma2, double n2) {
  const double max_sq = delta.cwiseAbs2().maxCoeff();
  if (!(max_sq > 0.0)) throw Error(ErrorKind::ZeroDelta, "lambda bound needs a nonzero delta");
  return sigma2 / n2 * eigen_ratio(G2, G1) / max_sq;
}

double lambda_bound_gaussian(const MleFit& target_fit, const SourceSummary& source, const Eigen::VectorXd& delta,
                             double sigma2, double n2) {
  return lambda_bound_gaussian(source.gram, target_fit.gram, delta, sigma2, n2);
}

double lambda_bound_glm(GlmFamily family, const Dataset& target, const SourceSummary& source,
                        const Eigen::VectorXd& beta_ref, double n2, double dispersion) {
  source.check(family, target.p());
  const Eigen::MatrixXd v2 = weighted_info(family, target, beta_ref);
  const Eigen::MatrixXd v1 = source_info(family, source, beta_ref);
  const Eigen::VectorXd u = source_mean_shift(family, source, beta_ref);
  const Eigen::VectorXd w = linalg::spd_solve(v1, u, "source information") / static_cast<double>(source.n1);
  const double max_sq = w.cwiseAbs2().maxCoeff();
  if (!(max_sq > 0.0)) throw Error(ErrorKind::ZeroDelta, "lambda bound needs Delta(beta_ref) != 0");
  return dispersion / n2 * eigen_ratio(v2, v1) / max_sq;
}

AnalyticMse analytic_mse_gaussian(const Eigen::MatrixXd& G1, const Eigen::MatrixXd& G2, double sigma2, double n2,
                                  const Eigen::VectorXd& delta, double lambda) {
  if (!(lambda >= 0.0)) throw Error(ErrorKind::Validation, "lambda must be nonnegative");
  const auto llt = linalg::cholesky(G2 + lambda * G1, "S(lambda)");
  const Eigen::MatrixXd s_inv_g2 = llt.solve(G2);
  AnalyticMse out;
  out.variance = sigma2 / n2 * llt.solve(s_inv_g2.transpose()).trace();
  out.bias = lambda == 0.0 ? 0.0 : lambda * lambda * llt.solve(G1 * delta).squaredNorm();
  out.total = out.variance + out.bias;
  return out;
}

}  // namespace ise
