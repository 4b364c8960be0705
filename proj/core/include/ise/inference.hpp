#pragma once

#include <Eigen/Dense>

#include "ise/dataset.hpp"
#include "ise/family.hpp"
#include "ise/glm.hpp"
#include "ise/shrink.hpp"

namespace ise {

struct IntervalSet {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  Eigen::VectorXd center;
  Eigen::VectorXd se;
  double level = 0.95;

  Eigen::VectorXd half_width() const { return upper - center; }
};

/// n2^-1 d S^-1 V2 S^-1, with S and V2 evaluated at `beta`.
Eigen::MatrixXd sandwich_variance(GlmFamily family, const Dataset& target, const SourceSummary& source,
                                  const Eigen::VectorXd& beta, double lambda, double dispersion);

/// Same, evaluated at the target MLE with d = d(gamma2_hat).
Eigen::MatrixXd sandwich_variance(const PenalizedProblem& problem, const MleFit& target_fit, double lambda);

/// Two-sided standard normal quantile z such that P(|Z| <= z) = level.
double normal_critical_value(double level);

/// beta_tilde +/- z * sqrt(diag(sandwich_var)).
IntervalSet confidence_intervals(const DialEstimate& estimate, double level);

/// Classical interval from d(gamma_hat) v(beta_hat)^-1 / n.
IntervalSet wald_intervals(GlmFamily family, const MleFit& fit, double level);

/// || (I - lambda S^-1 G1)^-1 S^-1 G2 - I ||_inf with S = G2 + lambda G1.
double debias_identity_residual(const Eigen::MatrixXd& G1, const Eigen::MatrixXd& G2, double lambda);

}  // namespace ise
