#include "ise/family.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ise/error.hpp"

namespace ise {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::Separation: return "Separation";
    case ErrorKind::PayloadMismatch: return "PayloadMismatch";
    case ErrorKind::ZeroDelta: return "ZeroDelta";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::TooManySources: return "TooManySources";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::Parse: return "ParseError";
  }
  return "Unknown";
}

namespace {

double clamp_theta(double theta) {
  return std::clamp(theta, -GlmFamily::kThetaClamp, GlmFamily::kThetaClamp);
}

}  // namespace

double GlmFamily::cumulant(double theta) const {
  if (is_gaussian()) return 0.5 * theta * theta;
  // log(1 + e^t) without overflow or cancellation for either sign of t
  return theta > 0.0 ? theta + std::log1p(std::exp(-theta)) : std::log1p(std::exp(theta));
}

double GlmFamily::mean(double theta) const {
  if (is_gaussian()) return theta;
  const double t = clamp_theta(theta);
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double GlmFamily::variance(double theta) const {
  if (is_gaussian()) return 1.0;
  const double mu = mean(theta);
  return mu * (1.0 - mu);
}

double GlmFamily::dispersion(double gamma) const {
  return is_gaussian() ? gamma : 1.0;
}

std::string_view GlmFamily::name() const {
  return is_gaussian() ? "gaussian" : "bernoulli";
}

GlmFamily parse_family(std::string_view name) {
  if (name == "gaussian" || name == "linear" || name == "normal") return GlmFamily::gaussian();
  if (name == "bernoulli" || name == "binomial" || name == "logistic") return GlmFamily::bernoulli();
  throw Error(ErrorKind::Validation, "unknown family '" + std::string(name) + "'");
}

Eigen::VectorXd link_inverse(GlmFamily family, const Eigen::VectorXd& eta) {
  if (family.is_gaussian()) return eta;
  return eta.unaryExpr([family](double t) { return family.mean(t); });
}

Eigen::VectorXd variance_weights(GlmFamily family, const Eigen::VectorXd& eta) {
  if (family.is_gaussian()) return Eigen::VectorXd::Ones(eta.size());
  return eta.unaryExpr([family](double t) { return family.variance(t); });
}

}  // namespace ise
