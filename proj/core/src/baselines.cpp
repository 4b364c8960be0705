#include "ise/baselines.hpp"

#include "ise/error.hpp"
#include "ise/linalg.hpp"
#include "ise/multi_source.hpp"

namespace ise {

MleFit pooled_mle(GlmFamily family, const Dataset& target, const Dataset& source) {
  return fit_mle(family, concat_sources({target, source}));
}

MleFit pooled_mle(GlmFamily family, const Dataset& target, const SourceSummary& source) {
  const FullDesign& full = source.design();
  if (full.response.size() != full.design.cols()) {
    throw Error(ErrorKind::PayloadMismatch, "pooled MLE needs the source responses");
  }
  return pooled_mle(family, target, Dataset(full.design, full.response));
}

Eigen::MatrixXd chen_owen_shi_weight(const MleFit& target_fit, const SourceSummary& source, double lambda) {
  if (!(lambda >= 0.0)) throw Error(ErrorKind::Validation, "lambda must be nonnegative");
  const Eigen::MatrixXd a1 = static_cast<double>(source.n1) * source.gram;
  const Eigen::MatrixXd a2 = static_cast<double>(target_fit.n) * target_fit.gram;
  const Eigen::MatrixXd right = a1 + lambda * a2;
  return linalg::spd_solve(right + lambda * a1, right, "Chen-Owen-Shi system");
}

Eigen::VectorXd chen_owen_shi(const MleFit& target_fit, const SourceSummary& source, double lambda) {
  const Eigen::MatrixXd w = chen_owen_shi_weight(target_fit, source, lambda);
  return w * target_fit.beta_hat + source.beta1_hat - w * source.beta1_hat;
}

ChenOwenShiCurve::ChenOwenShiCurve(const MleFit& target_fit, const SourceSummary& source)
    : a1_(static_cast<double>(source.n1) * source.gram),
      a2_(static_cast<double>(target_fit.n) * target_fit.gram),
      g2_inv_(linalg::spd_inverse(target_fit.gram, "target Gram matrix")),
      delta_sq_(delta_sq_hat(target_fit, source)),
      sigma2_(target_fit.gamma_hat),
      n2_(static_cast<double>(target_fit.n)) {}

double ChenOwenShiCurve::operator()(double lambda) const {
  const Eigen::MatrixXd right = a1_ + lambda * a2_;
  const Eigen::MatrixXd w = linalg::spd_solve(right + lambda * a1_, right, "Chen-Owen-Shi system");
  const Eigen::MatrixXd comp = Eigen::MatrixXd::Identity(w.rows(), w.cols()) - w;
  return sigma2_ / n2_ * (w * g2_inv_ * w.transpose()).trace() + (comp * delta_sq_ * comp.transpose()).trace();
}

double chen_owen_shi_lambda_hat(const MleFit& target_fit, const SourceSummary& source, LambdaBracket bracket) {
  const ChenOwenShiCurve curve(target_fit, source);
  return select_lambda(curve, bracket).lambda_tilde;
}

Eigen::VectorXd zheng_weight_estimator(const Eigen::VectorXd& beta2, const Eigen::MatrixXd& info2,
                                       const Eigen::VectorXd& beta1, const Eigen::MatrixXd& info1) {
  const Eigen::VectorXd d = beta1 - beta2;
  const Eigen::MatrixXd right = d * d.transpose() + linalg::spd_inverse(info1, "source information");
  const Eigen::MatrixXd left = right + linalg::spd_inverse(info2, "target information");
  const Eigen::MatrixXd w = linalg::spd_solve(linalg::symmetrize(left), right, "Zheng weight system");
  return w * beta2 + beta1 - w * beta1;
}

Eigen::VectorXd zheng_weight_estimator(const MleFit& target_fit, const MleFit& source_fit) {
  return zheng_weight_estimator(target_fit.beta_hat, static_cast<double>(target_fit.n) * target_fit.info,
                                source_fit.beta_hat, static_cast<double>(source_fit.n) * source_fit.info);
}

Eigen::VectorXd zheng_weight_estimator(GlmFamily family, const MleFit& target_fit, const SourceSummary& source) {
  const FullDesign& full = source.design();
  const Eigen::MatrixXd info1 =
      static_cast<double>(source.n1) * weighted_info(family, full.design, source.beta1_hat);
  return zheng_weight_estimator(target_fit.beta_hat, static_cast<double>(target_fit.n) * target_fit.info,
                                source.beta1_hat, info1);
}

}  // namespace ise
