#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "cslp/instance.hpp"
#include "cslp/sparse_matrix.hpp"

namespace cslp {

// LP column classes. x and eps are split into nonnegative pairs; z (the
// auxiliary product variables of the Kronecker form) stays free and is
// handled by each solver: the simplex keeps it basic, the interior-point
// solver splits it when converting to standard form.
enum class VarClass : std::uint8_t { z_free, x_plus, x_minus, eps_plus, eps_minus };

struct VarMeta {
  std::vector<VarClass> var_class;  // one entry per LP column
  std::vector<int> orig_index;      // position within x, eps, or z
};

enum class LpForm { vector, kcs };

// Shared column layout. Order is fixed as (z | x+ | x- | eps+ | eps-); the
// vector form simply has an empty z block (n2 = m2 = 1 convention).
struct LpShape {
  LpForm form = LpForm::vector;
  int n1 = 0, n2 = 0;  // signal shape; vector form uses n1 = n, n2 = 1
  int m1 = 0, m2 = 0;  // measurement shape; vector form uses m1 = m, m2 = 1

  int signal_len() const { return n1 * n2; }
  int num_eps() const { return m1 * m2; }
  int num_z() const { return form == LpForm::kcs ? n1 * m2 : 0; }
  int num_cols() const { return num_z() + 2 * signal_len() + 2 * num_eps(); }

  int z_begin() const { return 0; }
  int xp_begin() const { return num_z(); }
  int xm_begin() const { return num_z() + signal_len(); }
  int ep_begin() const { return num_z() + 2 * signal_len(); }
  int em_begin() const { return num_z() + 2 * signal_len() + num_eps(); }
};

// min over v >= 0 (z free) of (c_D + mu * c_P)' v  subject to  constraints * v = rhs.
// c_P is 1 exactly on x columns, c_D is 1 exactly on eps columns, z costs zero.
struct ParametricLp {
  SparseMatrix constraints;
  Eigen::VectorXd rhs;
  Eigen::VectorXd cost_penalty;   // c_D
  Eigen::VectorXd cost_sparsity;  // c_P
  VarMeta meta;
  LpShape shape;

  int rows() const { return constraints.rows(); }
  int cols() const { return constraints.cols(); }
};

// Closed forms for the built sizes, checked in tests against what the
// builders produce.
inline std::int64_t vector_lp_cols(std::int64_t m, std::int64_t n) { return 2 * n + 2 * m; }
inline std::int64_t vector_lp_nnz(std::int64_t nnz_a, std::int64_t m) { return 2 * nnz_a + 2 * m; }
inline std::int64_t kcs_lp_rows(std::int64_t m1, std::int64_t n1, std::int64_t m2) {
  return n1 * m2 + m1 * m2;
}
inline std::int64_t kcs_lp_cols(std::int64_t m1, std::int64_t n1, std::int64_t m2,
                                std::int64_t n2) {
  return n1 * m2 + 2 * n1 * n2 + 2 * m1 * m2;
}
inline std::int64_t kcs_lp_nnz(std::int64_t n1, std::int64_t n2, std::int64_t m2,
                               std::int64_t nnz_a, std::int64_t m1) {
  return n1 * m2 * (1 + 2 * n2) + m2 * nnz_a + 2 * m1 * m2;
}

// Row i of the constraint block is [A_i, -A_i, e_i, -e_i], rhs y.
ParametricLp build_vector_lp(const VectorInstance& inst);

// Constraints:  z - W(x+ - x-) = 0   (n1*m2 rows)
//               Vz + (eps+ - eps-) = vec(Y)   (m1*m2 rows)
// with V = diag(A, ..., A) and W the grid of b_ij * I(n1) blocks, so that
// V * W = B (x) A.
ParametricLp build_kcs_lp(const KcsInstance& inst);

// The sparse factors themselves, exposed for identity checks.
SparseMatrix make_block_diag_v(const Eigen::MatrixXd& A, int m2);
SparseMatrix make_kron_weight_w(const Eigen::MatrixXd& B, int n1);

struct ExtractedSolution {
  Eigen::VectorXd x;    // x+ - x-, length n1*n2
  Eigen::MatrixXd X;    // unvec(x), kcs form only
  Eigen::VectorXd eps;  // eps+ - eps-
  double eps_abs_max = 0.0;
  double l1_x = 0.0;    // 1'(x+ + x-)
  double l1_eps = 0.0;  // 1'(eps+ + eps-)
};

ExtractedSolution extract_solution(const LpShape& shape, const Eigen::VectorXd& v);

inline ExtractedSolution extract_solution(const ParametricLp& lp, const Eigen::VectorXd& v) {
  return extract_solution(lp.shape, v);
}

}  // namespace cslp
