#include "cslp/basis_factor.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace cslp {

namespace {
// Peel pivots below this fraction of their column's largest entry are left
// to the bump instead, to keep the triangular sweep well conditioned.
constexpr double kPeelRelTol = 0.01;
constexpr double kBumpSingularTol = 1e-12;
constexpr double kEtaDropTol = 1e-14;
}  // namespace

bool FactorizedBasis::factorize(const SparseMatrix& A, const std::vector<int>& basis_cols) {
  const int r = A.rows();
  if (static_cast<int>(basis_cols.size()) != r) {
    throw std::invalid_argument("FactorizedBasis: basis size must equal row count");
  }
  ok_ = false;
  dim_ = r;
  etas_.clear();
  front_diag_.clear();
  front_entries_.clear();
  bump_in_front_.clear();
  row_to_pos_.assign(r, -1);
  pos_to_row_.assign(r, -1);
  col_to_pos_.assign(r, -1);
  pos_to_col_.assign(r, -1);
  if (r == 0) {
    bump_dim_ = 0;
    ok_ = true;
    return true;
  }

  // Row-wise adjacency over the chosen columns, plus live nonzero counts.
  std::vector<std::vector<int>> row_cols(r);
  std::vector<int> col_count(r, 0);
  std::vector<double> col_maxabs(r, 0.0);
  for (int p = 0; p < r; ++p) {
    const int j = basis_cols[p];
    auto rows = A.col_rows(j);
    auto vals = A.col_values(j);
    col_count[p] = static_cast<int>(rows.size());
    for (std::size_t t = 0; t < rows.size(); ++t) {
      row_cols[rows[t]].push_back(p);
      col_maxabs[p] = std::max(col_maxabs[p], std::abs(vals[t]));
    }
    if (col_count[p] == 0) return false;  // structurally empty column
  }

  std::vector<bool> row_pivoted(r, false);
  std::vector<bool> col_pivoted(r, false);
  std::vector<bool> col_rejected(r, false);
  std::deque<int> singletons;
  for (int p = 0; p < r; ++p) {
    if (col_count[p] == 1) singletons.push_back(p);
  }

  int front = 0;
  while (!singletons.empty()) {
    const int p = singletons.front();
    singletons.pop_front();
    if (col_pivoted[p] || col_rejected[p] || col_count[p] != 1) continue;

    // Locate the single live entry of this column.
    const int j = basis_cols[p];
    auto rows = A.col_rows(j);
    auto vals = A.col_values(j);
    int pivot_row = -1;
    double pivot_val = 0.0;
    for (std::size_t t = 0; t < rows.size(); ++t) {
      if (!row_pivoted[rows[t]]) {
        pivot_row = rows[t];
        pivot_val = vals[t];
        break;
      }
    }
    if (pivot_row < 0) return false;
    if (std::abs(pivot_val) < kPeelRelTol * col_maxabs[p]) {
      col_rejected[p] = true;  // bump handles it with real pivoting
      continue;
    }

    row_to_pos_[pivot_row] = front;
    pos_to_row_[front] = pivot_row;
    col_to_pos_[p] = front;
    pos_to_col_[front] = p;
    col_pivoted[p] = true;
    row_pivoted[pivot_row] = true;
    ++front;

    for (int p2 : row_cols[pivot_row]) {
      if (col_pivoted[p2] || p2 == p) continue;
      if (--col_count[p2] == 0) {
        if (!col_rejected[p2]) return false;  // live column lost all rows
      } else if (col_count[p2] == 1 && !col_rejected[p2]) {
        singletons.push_back(p2);
      }
    }
  }

  // Assign bump positions after the front.
  bump_dim_ = r - front;
  int next = front;
  for (int p = 0; p < r; ++p) {
    if (!col_pivoted[p]) {
      col_to_pos_[p] = next;
      pos_to_col_[next] = p;
      ++next;
    }
  }
  next = front;
  for (int i = 0; i < r; ++i) {
    if (!row_pivoted[i]) {
      row_to_pos_[i] = next;
      pos_to_row_[next] = i;
      ++next;
    }
  }

  // Gather the permuted entries: front columns split into diagonal plus
  // strictly-above entries; bump columns split between front rows (U12) and
  // the dense bump block.
  front_diag_.assign(front, 0.0);
  front_entries_.assign(front, {});
  bump_in_front_.assign(bump_dim_, {});
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(bump_dim_, bump_dim_);

  for (int p = 0; p < r; ++p) {
    const int cpos = col_to_pos_[p];
    const int j = basis_cols[p];
    auto rows = A.col_rows(j);
    auto vals = A.col_values(j);
    for (std::size_t t = 0; t < rows.size(); ++t) {
      const int rpos = row_to_pos_[rows[t]];
      if (cpos < front) {
        if (rpos == cpos) {
          front_diag_[cpos] = vals[t];
        } else {
          front_entries_[cpos].emplace_back(rpos, vals[t]);
        }
      } else {
        if (rpos < front) {
          bump_in_front_[cpos - front].emplace_back(rpos, vals[t]);
        } else {
          S(rpos - front, cpos - front) = vals[t];
        }
      }
    }
  }

  if (bump_dim_ > 0) {
    bump_lu_.compute(S);
    const auto& lu = bump_lu_.matrixLU();
    const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
    for (int i = 0; i < bump_dim_; ++i) {
      if (std::abs(lu(i, i)) < kBumpSingularTol * scale) return false;
    }
  }

  ok_ = true;
  return true;
}

void FactorizedBasis::base_solve(Eigen::VectorXd& x) const {
  const int f = static_cast<int>(front_diag_.size());
  Eigen::VectorXd xp(dim_);
  for (int i = 0; i < dim_; ++i) xp[row_to_pos_[i]] = x[i];

  if (bump_dim_ > 0) {
    Eigen::VectorXd v2 = bump_lu_.solve(xp.tail(bump_dim_));
    for (int s = 0; s < bump_dim_; ++s) {
      for (const auto& [rpos, val] : bump_in_front_[s]) xp[rpos] -= val * v2[s];
    }
    xp.tail(bump_dim_) = v2;
  }
  // U11 is upper triangular: back substitution, column oriented.
  for (int t = f - 1; t >= 0; --t) {
    const double vt = xp[t] / front_diag_[t];
    xp[t] = vt;
    for (const auto& [rpos, val] : front_entries_[t]) xp[rpos] -= val * vt;
  }

  for (int pos = 0; pos < dim_; ++pos) x[pos_to_col_[pos]] = xp[pos];
}

void FactorizedBasis::base_solve_transpose(Eigen::VectorXd& x) const {
  const int f = static_cast<int>(front_diag_.size());
  Eigen::VectorXd xp(dim_);
  for (int p = 0; p < dim_; ++p) xp[col_to_pos_[p]] = x[p];

  // U11^T is lower triangular: forward substitution.
  for (int t = 0; t < f; ++t) {
    double acc = xp[t];
    for (const auto& [rpos, val] : front_entries_[t]) acc -= val * xp[rpos];
    xp[t] = acc / front_diag_[t];
  }
  if (bump_dim_ > 0) {
    Eigen::VectorXd rhs2 = xp.tail(bump_dim_);
    for (int s = 0; s < bump_dim_; ++s) {
      double acc = rhs2[s];
      for (const auto& [rpos, val] : bump_in_front_[s]) acc -= val * xp[rpos];
      rhs2[s] = acc;
    }
    xp.tail(bump_dim_) = bump_lu_.transpose().solve(rhs2);
  }

  for (int pos = 0; pos < dim_; ++pos) x[pos_to_row_[pos]] = xp[pos];
}

void FactorizedBasis::solve(Eigen::VectorXd& x) const {
  base_solve(x);
  for (const Eta& e : etas_) {
    const double xp = x[e.pivot_pos] / e.pivot_value;
    x[e.pivot_pos] = xp;
    if (xp != 0.0) {
      for (std::size_t t = 0; t < e.index.size(); ++t) x[e.index[t]] -= e.value[t] * xp;
    }
  }
}

void FactorizedBasis::solve_transpose(Eigen::VectorXd& x) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double acc = x[it->pivot_pos];
    for (std::size_t t = 0; t < it->index.size(); ++t) acc -= it->value[t] * x[it->index[t]];
    x[it->pivot_pos] = acc / it->pivot_value;
  }
  base_solve_transpose(x);
}

bool FactorizedBasis::push_eta(int p, const Eigen::VectorXd& w, double piv_tol) {
  if (!ok_ || p < 0 || p >= dim_) return false;
  if (std::abs(w[p]) < piv_tol) return false;
  Eta e;
  e.pivot_pos = p;
  e.pivot_value = w[p];
  for (int i = 0; i < dim_; ++i) {
    if (i != p && std::abs(w[i]) > kEtaDropTol) {
      e.index.push_back(i);
      e.value.push_back(w[i]);
    }
  }
  etas_.push_back(std::move(e));
  return true;
}

}  // namespace cslp
