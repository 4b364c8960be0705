#include "ise/linalg.hpp"

#include <string>

#include "ise/error.hpp"

namespace ise::linalg {

namespace {

// Reciprocal condition number below which an SPD matrix is treated as singular.
constexpr double kMinRcond = 1e-14;

}  // namespace

Eigen::LLT<Eigen::MatrixXd> cholesky(const Eigen::MatrixXd& a, std::string_view what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " is not a non-empty square matrix");
  }
  if (!a.allFinite()) {
    throw Error(ErrorKind::RankDeficient, std::string(what) + " has non-finite entries");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success || !(llt.rcond() > kMinRcond)) {
    throw Error(ErrorKind::RankDeficient, std::string(what) + " is not positive definite");
  }
  return llt;
}

Eigen::VectorXd spd_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, std::string_view what) {
  return cholesky(a, what).solve(b);
}

Eigen::MatrixXd spd_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, std::string_view what) {
  return cholesky(a, what).solve(b);
}

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& a, std::string_view what) {
  return cholesky(a, what).solve(Eigen::MatrixXd::Identity(a.rows(), a.cols()));
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& a) {
  return 0.5 * (a + a.transpose());
}

SymEigen sym_eigen(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(a));
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::NonConvergence, "symmetric eigensolver failed");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

Eigen::MatrixXd sym_sqrt(const Eigen::MatrixXd& a) {
  const SymEigen es = sym_eigen(a);
  if (es.values.minCoeff() <= 0.0) {
    throw Error(ErrorKind::RankDeficient, "square root of a matrix that is not positive definite");
  }
  return es.vectors * es.values.cwiseSqrt().asDiagonal() * es.vectors.transpose();
}

double inf_norm(const Eigen::MatrixXd& a) {
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace ise::linalg
