#pragma once

#include <string_view>

#include <Eigen/Dense>

// Small dense helpers for the symmetric positive definite systems that show up
// everywhere: Gram matrices, weighted information, S(lambda) = V2 + lambda V1.
namespace ise::linalg {

/// Cholesky factor of an SPD matrix. Throws RankDeficient when the
/// factorisation fails or the matrix is numerically singular.
Eigen::LLT<Eigen::MatrixXd> cholesky(const Eigen::MatrixXd& a, std::string_view what);

Eigen::VectorXd spd_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, std::string_view what);
Eigen::MatrixXd spd_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, std::string_view what);
Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& a, std::string_view what);

/// (A + A^T) / 2
Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& a);

struct SymEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
};

/// Eigendecomposition of the symmetrised input.
SymEigen sym_eigen(const Eigen::MatrixXd& a);

/// Symmetric square root of an SPD matrix.
Eigen::MatrixXd sym_sqrt(const Eigen::MatrixXd& a);

/// Max absolute row sum.
double inf_norm(const Eigen::MatrixXd& a);

}  // namespace ise::linalg
