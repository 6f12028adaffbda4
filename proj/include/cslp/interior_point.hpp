#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "cslp/lp_model.hpp"
#include "cslp/solve_report.hpp"

namespace cslp {

// Standard-form LP  min c'v  s.t.  Av = b, v >= 0,  derived from a
// ParametricLp. basis_pursuit drops the eps block and enforces the
// measurements exactly; fixed_mu folds mu into a single cost vector.
// Free z columns are split into a nonnegative pair either way.
enum class StandardFormMode { basis_pursuit, fixed_mu };

struct StandardLp {
  SparseMatrix A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;

  // Fold map back onto the parametric LP's column layout.
  std::vector<int> origin_col;
  std::vector<double> origin_sign;
  // Index of the column whose constraint coefficients are the exact negative
  // (the other half of a +/- split), or -1.
  std::vector<int> split_partner;
  LpShape shape;

  Eigen::VectorXd fold(const Eigen::VectorXd& v_std) const;
};

StandardLp to_standard_form(const ParametricLp& lp, StandardFormMode mode, double mu = 0.0);

struct IpmOptions {
  double tol = 1e-8;            // primal, dual, and relative-gap targets
  double sigma = 0.1;           // centering parameter
  double step_fraction = 0.99995;
  int max_iterations = 200;
  int dense_threshold = 128;    // at most this many rows: dense normal equations
  double time_limit_sec = 0.0;
  std::ostream* log = nullptr;  // per-iteration CSV: iter,primal_res,dual_res,gap
};

// Primal-dual path following with a fixed centering parameter. The Newton
// step comes from the normal equations A D^2 A' dlam = rhs, D^2 = diag(v/s),
// factored by sparse Cholesky with AMD ordering (dense Cholesky below the
// row threshold). Starting point v = s = 1, w = 0.
SolveReport ipm_solve(const StandardLp& slp, const IpmOptions& opts = {});

}  // namespace cslp
