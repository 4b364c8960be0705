#pragma once

#include <Eigen/Dense>

#include "ise/dataset.hpp"
#include "ise/dial_select.hpp"
#include "ise/family.hpp"
#include "ise/glm.hpp"
#include "ise/shrink.hpp"

namespace ise {

/// MLE on the concatenated target and source units.
MleFit pooled_mle(GlmFamily family, const Dataset& target, const Dataset& source);

/// Same, pulling the source units out of a FullDesign summary that carries the
/// response. Gram payloads are refused with PayloadMismatch.
MleFit pooled_mle(GlmFamily family, const Dataset& target, const SourceSummary& source);

/// Chen, Owen and Shi weight (X1X1' + lambda X2X2' + lambda X1X1')^-1 (X1X1' + lambda X2X2')
/// with unscaled cross-products.
Eigen::MatrixXd chen_owen_shi_weight(const MleFit& target_fit, const SourceSummary& source, double lambda);

/// W beta2_hat + (I - W) beta1_hat with the weight above.
Eigen::VectorXd chen_owen_shi(const MleFit& target_fit, const SourceSummary& source, double lambda);

/// Plug-in MSE of that estimator: sigma2/n2 tr(W G2^-1 W') + tr((I-W) D (I-W)').
class ChenOwenShiCurve {
 public:
  ChenOwenShiCurve(const MleFit& target_fit, const SourceSummary& source);
  double operator()(double lambda) const;

 private:
  Eigen::MatrixXd a1_, a2_, g2_inv_, delta_sq_;
  double sigma2_, n2_;
};

/// Minimiser of ChenOwenShiCurve over the standard bracket.
double chen_owen_shi_lambda_hat(const MleFit& target_fit, const SourceSummary& source, LambdaBracket bracket = {});

/// W beta2 + (I - W) beta1 with W = [dd' + I1^-1 + I2^-1]^-1 [dd' + I1^-1],
/// d = beta1 - beta2 and I_j = X_j A(X_j' beta_j) X_j' (unscaled).
Eigen::VectorXd zheng_weight_estimator(const Eigen::VectorXd& beta2, const Eigen::MatrixXd& info2,
                                       const Eigen::VectorXd& beta1, const Eigen::MatrixXd& info1);
Eigen::VectorXd zheng_weight_estimator(const MleFit& target_fit, const MleFit& source_fit);
Eigen::VectorXd zheng_weight_estimator(GlmFamily family, const MleFit& target_fit, const SourceSummary& source);

}  // namespace ise
