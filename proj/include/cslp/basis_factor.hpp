#pragma once

#include <Eigen/Dense>
#include <Eigen/LU>
#include <vector>

#include "cslp/sparse_matrix.hpp"

namespace cslp {

// Factorization of a square basis drawn from the columns of an LP constraint
// matrix, supporting solve and transpose-solve, with product-form (eta)
// updates between refactorizations.
//
// Refactorization peels column singletons first: a column whose only
// remaining nonzero sits in a not-yet-pivoted row needs no elimination, so a
// basis that is a permuted triangle (the sign-of-rhs starting basis, and the
// Kronecker-form basis with its z block) factors in O(nnz). Whatever is left
// after peeling (the bump) is small for these problems and gets a dense
// partial-pivoting LU. The permuted basis then reads
//
//     [ U11  U12 ]   U11 upper triangular over peeled rows/cols,
//     [  0   S   ]   S the dense bump,
//
// and both solves reduce to one triangular sweep plus one bump solve.
class FactorizedBasis {
 public:
  // Factorize columns basis_cols of A; basis_cols.size() must equal A.rows().
  // Returns false (and clears ok()) if the basis is singular.
  bool factorize(const SparseMatrix& A, const std::vector<int>& basis_cols);

  bool ok() const { return ok_; }
  int dim() const { return dim_; }
  int bump_dim() const { return bump_dim_; }

  // x := B^{-1} x (FTRAN) and x := B^{-T} x (BTRAN), including etas.
  void solve(Eigen::VectorXd& x) const;
  void solve_transpose(Eigen::VectorXd& x) const;

  // Record the replacement of the basis column at position p, where w is
  // B^{-1} times the incoming column under the current factorization.
  // Returns false when |w[p]| < piv_tol, in which case the caller must
  // refactorize instead.
  bool push_eta(int p, const Eigen::VectorXd& w, double piv_tol);

  int updates_since_refactor() const { return static_cast<int>(etas_.size()); }

 private:
  struct Eta {
    int pivot_pos;
    double pivot_value;
    std::vector<int> index;  // positions other than pivot_pos
    std::vector<double> value;
  };

  void base_solve(Eigen::VectorXd& x) const;
  void base_solve_transpose(Eigen::VectorXd& x) const;

  bool ok_ = false;
  int dim_ = 0;
  int bump_dim_ = 0;

  // Peeled (front) part, in pivot order. Column t keeps its subdiagonal
  // entries as (front position < t, value) pairs plus the diagonal.
  std::vector<double> front_diag_;
  std::vector<std::vector<std::pair<int, double>>> front_entries_;
  // Bump columns: entries in front rows (the U12 block), by bump column.
  std::vector<std::vector<std::pair<int, double>>> bump_in_front_;

  // Permutations between original row index / basis position and the
  // factor's internal order (front first, then bump).
  std::vector<int> row_to_pos_, pos_to_row_;
  std::vector<int> col_to_pos_, pos_to_col_;

  Eigen::PartialPivLU<Eigen::MatrixXd> bump_lu_;
  std::vector<Eta> etas_;
};

}  // namespace cslp
