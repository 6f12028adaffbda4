#include "cslp/lp_model.hpp"

#include <stdexcept>

namespace cslp {

namespace {

void fill_costs_and_meta(ParametricLp& lp) {
  const LpShape& sh = lp.shape;
  const int c = sh.num_cols();
  lp.cost_penalty = Eigen::VectorXd::Zero(c);
  lp.cost_sparsity = Eigen::VectorXd::Zero(c);
  lp.meta.var_class.resize(c);
  lp.meta.orig_index.resize(c);

  for (int j = 0; j < sh.num_z(); ++j) {
    lp.meta.var_class[j] = VarClass::z_free;
    lp.meta.orig_index[j] = j;
  }
  for (int j = 0; j < sh.signal_len(); ++j) {
    lp.meta.var_class[sh.xp_begin() + j] = VarClass::x_plus;
    lp.meta.orig_index[sh.xp_begin() + j] = j;
    lp.meta.var_class[sh.xm_begin() + j] = VarClass::x_minus;
    lp.meta.orig_index[sh.xm_begin() + j] = j;
    lp.cost_sparsity[sh.xp_begin() + j] = 1.0;
    lp.cost_sparsity[sh.xm_begin() + j] = 1.0;
  }
  for (int i = 0; i < sh.num_eps(); ++i) {
    lp.meta.var_class[sh.ep_begin() + i] = VarClass::eps_plus;
    lp.meta.orig_index[sh.ep_begin() + i] = i;
    lp.meta.var_class[sh.em_begin() + i] = VarClass::eps_minus;
    lp.meta.orig_index[sh.em_begin() + i] = i;
    lp.cost_penalty[sh.ep_begin() + i] = 1.0;
    lp.cost_penalty[sh.em_begin() + i] = 1.0;
  }
}

}  // namespace

ParametricLp build_vector_lp(const VectorInstance& inst) {
  const int m = static_cast<int>(inst.A.rows());
  const int n = static_cast<int>(inst.A.cols());
  if (inst.y.size() != m || inst.x0.size() != n) {
    throw std::invalid_argument("build_vector_lp: inconsistent instance dimensions");
  }

  ParametricLp lp;
  lp.shape = LpShape{LpForm::vector, n, 1, m, 1};
  const LpShape& sh = lp.shape;

  lp.constraints = SparseMatrix(m, sh.num_cols());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      const double a = inst.A(i, j);
      if (a == 0.0) continue;
      lp.constraints.add(i, sh.xp_begin() + j, a);
      lp.constraints.add(i, sh.xm_begin() + j, -a);
    }
  }
  for (int i = 0; i < m; ++i) {
    lp.constraints.add(i, sh.ep_begin() + i, 1.0);
    lp.constraints.add(i, sh.em_begin() + i, -1.0);
  }
  lp.constraints.compress();

  lp.rhs = inst.y;
  fill_costs_and_meta(lp);
  return lp;
}

SparseMatrix make_block_diag_v(const Eigen::MatrixXd& A, int m2) {
  const int m1 = static_cast<int>(A.rows());
  const int n1 = static_cast<int>(A.cols());
  SparseMatrix V(m1 * m2, n1 * m2);
  for (int b = 0; b < m2; ++b) {
    for (int j = 0; j < n1; ++j) {
      for (int i = 0; i < m1; ++i) {
        if (A(i, j) != 0.0) V.add(b * m1 + i, b * n1 + j, A(i, j));
      }
    }
  }
  V.compress();
  return V;
}

SparseMatrix make_kron_weight_w(const Eigen::MatrixXd& B, int n1) {
  const int m2 = static_cast<int>(B.rows());
  const int n2 = static_cast<int>(B.cols());
  SparseMatrix W(n1 * m2, n1 * n2);
  for (int i2 = 0; i2 < m2; ++i2) {
    for (int j2 = 0; j2 < n2; ++j2) {
      if (B(i2, j2) == 0.0) continue;
      for (int d = 0; d < n1; ++d) {
        W.add(i2 * n1 + d, j2 * n1 + d, B(i2, j2));
      }
    }
  }
  W.compress();
  return W;
}

ParametricLp build_kcs_lp(const KcsInstance& inst) {
  const int m1 = static_cast<int>(inst.A.rows());
  const int n1 = static_cast<int>(inst.A.cols());
  const int m2 = static_cast<int>(inst.B.rows());
  const int n2 = static_cast<int>(inst.B.cols());
  if (inst.X0.rows() != n1 || inst.X0.cols() != n2 || inst.Y.rows() != m1 ||
      inst.Y.cols() != m2) {
    throw std::invalid_argument("build_kcs_lp: inconsistent instance dimensions");
  }

  ParametricLp lp;
  lp.shape = LpShape{LpForm::kcs, n1, n2, m1, m2};
  const LpShape& sh = lp.shape;

  const int nz = sh.num_z();    // rows of block 1
  const int me = sh.num_eps();  // rows of block 2
  lp.constraints = SparseMatrix(nz + me, sh.num_cols());

  const SparseMatrix V = make_block_diag_v(inst.A, m2);
  const SparseMatrix W = make_kron_weight_w(inst.B, n1);

  // Block 1: z - W(x+ - x-) = 0.
  for (int j = 0; j < nz; ++j) lp.constraints.add(j, sh.z_begin() + j, 1.0);
  for (int j = 0; j < W.cols(); ++j) {
    auto rows = W.col_rows(j);
    auto vals = W.col_values(j);
    for (std::size_t t = 0; t < rows.size(); ++t) {
      lp.constraints.add(rows[t], sh.xp_begin() + j, -vals[t]);
      lp.constraints.add(rows[t], sh.xm_begin() + j, vals[t]);
    }
  }
  // Block 2: V z + (eps+ - eps-) = vec(Y).
  for (int j = 0; j < V.cols(); ++j) {
    auto rows = V.col_rows(j);
    auto vals = V.col_values(j);
    for (std::size_t t = 0; t < rows.size(); ++t) {
      lp.constraints.add(nz + rows[t], sh.z_begin() + j, vals[t]);
    }
  }
  for (int i = 0; i < me; ++i) {
    lp.constraints.add(nz + i, sh.ep_begin() + i, 1.0);
    lp.constraints.add(nz + i, sh.em_begin() + i, -1.0);
  }
  lp.constraints.compress();

  lp.rhs = Eigen::VectorXd::Zero(nz + me);
  lp.rhs.tail(me) = vec(inst.Y);
  fill_costs_and_meta(lp);
  return lp;
}

ExtractedSolution extract_solution(const LpShape& shape, const Eigen::VectorXd& v) {
  if (v.size() != shape.num_cols()) {
    throw std::invalid_argument("extract_solution: variable vector length mismatch");
  }
  const int n = shape.signal_len();
  const int m = shape.num_eps();

  ExtractedSolution out;
  out.x = v.segment(shape.xp_begin(), n) - v.segment(shape.xm_begin(), n);
  out.eps = v.segment(shape.ep_begin(), m) - v.segment(shape.em_begin(), m);
  out.eps_abs_max = m > 0 ? out.eps.cwiseAbs().maxCoeff() : 0.0;
  out.l1_x = v.segment(shape.xp_begin(), n).sum() + v.segment(shape.xm_begin(), n).sum();
  out.l1_eps = v.segment(shape.ep_begin(), m).sum() + v.segment(shape.em_begin(), m).sum();
  if (shape.form == LpForm::kcs) {
    out.X = unvec(out.x, shape.n1, shape.n2);
  }
  return out;
}

}  // namespace cslp
