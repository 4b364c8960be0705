#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "ise/dataset.hpp"
#include "ise/family.hpp"
#include "ise/glm.hpp"
#include "ise/shrink.hpp"

namespace ise {

struct MseCurve {
  std::vector<double> lambda_grid;
  std::vector<double> mse_values;
  double lambda_tilde = 0.0;
  double mse_at_tilde = 0.0;
  double lambda_lower_bound = std::numeric_limits<double>::quiet_NaN();
  double at_zero = 0.0;
};

struct LambdaBracket {
  double lo = 1e-8;
  double hi = 1e3;
};

struct SelectOptions {
  int grid_points = 200;
  double rel_tol = 1e-6;
};

/// Log-grid scan followed by golden-section refinement (in log lambda) between
/// the neighbours of the grid argmin.
MseCurve select_lambda(const std::function<double(double)>& curve, LambdaBracket bracket = {},
                       const SelectOptions& options = {});

/// (delta_p delta_p^T - sigma2/n2 G2^-1)_+ with delta_p = beta2_hat - beta1_hat.
Eigen::MatrixXd delta_sq_hat(const Eigen::VectorXd& delta_p, double sigma2, double n2, const Eigen::MatrixXd& G2);
Eigen::MatrixXd delta_sq_hat(const MleFit& target_fit, const SourceSummary& source);

/// sigma2/n2 tr(S^-2 G2) + lambda^2 tr(G1 S^-2 G1 D), S = G2 + lambda G1.
class GaussianMseCurve {
 public:
  GaussianMseCurve(const MleFit& target_fit, const SourceSummary& source);
  GaussianMseCurve(Eigen::MatrixXd G1, Eigen::MatrixXd G2, double sigma2, double n2, Eigen::MatrixXd delta_sq);

  double operator()(double lambda) const;
  const Eigen::MatrixXd& delta_sq() const { return delta_sq_; }

 private:
  Eigen::MatrixXd g1_, g2_, delta_sq_;
  double sigma2_, n2_;
};

double estimated_mse_gaussian(const MleFit& target_fit, const SourceSummary& source, double lambda);

/// d tr(S^-2 V2) + n2/n1^2 lambda^2 |S^-1 X1 Delta|^2 with everything at beta2_hat.
class GlmAmseCurve {
 public:
  GlmAmseCurve(GlmFamily family, const MleFit& target_fit, const SourceSummary& source);

  double operator()(double lambda) const;

 private:
  Eigen::MatrixXd v2_, v1_;
  Eigen::VectorXd shift_;
  double dispersion_, n1_, n2_;
};

double estimated_amse_glm(GlmFamily family, const Dataset& target, const MleFit& target_fit,
                          const SourceSummary& source, double lambda);

/// (sigma2/n2) min_r(kappa_r / g_r) / max_r delta_r^2, eigenvalues of G2
/// increasing and of G2^1/2 G1^-1 G2^1/2 decreasing.
double lambda_bound_gaussian(const Eigen::MatrixXd& G1, const Eigen::MatrixXd& G2, const Eigen::VectorXd& delta,
                             double sigma2, double n2);
double lambda_bound_gaussian(const MleFit& target_fit, const SourceSummary& source, const Eigen::VectorXd& delta,
                             double sigma2, double n2);

/// Nonlinear analogue with v2, v1 and X1 Delta evaluated at beta_ref.
double lambda_bound_glm(GlmFamily family, const Dataset& target, const SourceSummary& source,
                        const Eigen::VectorXd& beta_ref, double n2, double dispersion = 1.0);

struct AnalyticMse {
  double total = 0.0;
  double variance = 0.0;
  double bias = 0.0;
};

/// Exact MSE of the Gaussian estimator for known G1, G2, sigma2 and delta.
AnalyticMse analytic_mse_gaussian(const Eigen::MatrixXd& G1, const Eigen::MatrixXd& G2, double sigma2, double n2,
                                  const Eigen::VectorXd& delta, double lambda);

}  // namespace ise
