#pragma once

#include <string_view>

#include <Eigen/Dense>

namespace ise {

/// Natural exponential family with canonical link, parameterised by the
/// cumulant b(theta). Only the two families exercised by the shrinkage
/// estimator are supported.
class GlmFamily {
 public:
  enum class Kind { GaussianIdentity, BernoulliLogit };

  /// Linear predictors are clamped to this range before exponentiation in the
  /// Bernoulli family.
  static constexpr double kThetaClamp = 35.0;

  constexpr explicit GlmFamily(Kind kind) : kind_(kind) {}

  static constexpr GlmFamily gaussian() { return GlmFamily(Kind::GaussianIdentity); }
  static constexpr GlmFamily bernoulli() { return GlmFamily(Kind::BernoulliLogit); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_gaussian() const { return kind_ == Kind::GaussianIdentity; }

  /// b(theta)
  double cumulant(double theta) const;
  /// h(theta) = b'(theta), the inverse link
  double mean(double theta) const;
  /// b''(theta)
  double variance(double theta) const;
  /// d(gamma): sigma^2 for Gaussian, 1 for Bernoulli
  double dispersion(double gamma) const;

  std::string_view name() const;

  friend constexpr bool operator==(GlmFamily a, GlmFamily b) { return a.kind_ == b.kind_; }

 private:
  Kind kind_;
};

/// Parses "gaussian" / "bernoulli" (also "binomial", "logistic", "linear").
GlmFamily parse_family(std::string_view name);

/// Elementwise inverse link.
Eigen::VectorXd link_inverse(GlmFamily family, const Eigen::VectorXd& eta);

/// Elementwise b''.
Eigen::VectorXd variance_weights(GlmFamily family, const Eigen::VectorXd& eta);

}  // namespace ise
