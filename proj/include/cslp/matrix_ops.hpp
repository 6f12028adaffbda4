#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace cslp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Column-major flattening: entry (i, j) of X lands at position j * rows + i.
// This convention is fixed globally; every reshape in the project uses it.
inline VectorXd vec(const MatrixXd& X) {
  return Eigen::Map<const VectorXd>(X.data(), X.size());
}

// Inverse of vec: stack a length n1*n2 vector into an n1 x n2 matrix.
inline MatrixXd unvec(const VectorXd& x, Eigen::Index n1, Eigen::Index n2) {
  if (x.size() != n1 * n2) {
    throw std::invalid_argument("unvec: vector length does not equal n1*n2");
  }
  return Eigen::Map<const MatrixXd>(x.data(), n1, n2);
}

// Kronecker product B (x) A: block (i, j) equals b_ij * A, so the result is
// (m1*m2) x (n1*n2) when A is m1 x n1 and B is m2 x n2.
inline MatrixXd kron(const MatrixXd& B, const MatrixXd& A) {
  MatrixXd U(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < B.rows(); ++i) {
    for (Eigen::Index j = 0; j < B.cols(); ++j) {
      U.block(i * A.rows(), j * A.cols(), A.rows(), A.cols()) = B(i, j) * A;
    }
  }
  return U;
}

// Two-sided measurement Y = A * X * B^T; equivalently vec(Y) = (B (x) A) vec(X).
inline MatrixXd apply_kcs(const MatrixXd& A, const MatrixXd& X, const MatrixXd& B) {
  if (A.cols() != X.rows() || X.cols() != B.cols()) {
    throw std::invalid_argument("apply_kcs: nonconformable dimensions");
  }
  return A * X * B.transpose();
}

}  // namespace cslp
