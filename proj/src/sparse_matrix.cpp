#include "cslp/sparse_matrix.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cslp {

void SparseMatrix::add(int row, int col, double value) {
  if (compressed_) {
    throw std::logic_error("SparseMatrix::add after compress");
  }
  if (row < 0 || row >= rows_ || col < 0 || col >= cols_) {
    throw std::out_of_range("SparseMatrix::add: index out of range");
  }
  tri_row_.push_back(row);
  tri_col_.push_back(col);
  tri_val_.push_back(value);
}

void SparseMatrix::compress() {
  if (compressed_) return;

  // Counting sort by column, then sort each column's slice by row and fold
  // duplicates. Exact zeros (including cancellations) are not stored.
  const std::size_t nt = tri_val_.size();
  std::vector<int> count(static_cast<std::size_t>(cols_) + 1, 0);
  for (std::size_t t = 0; t < nt; ++t) count[tri_col_[t] + 1]++;
  std::partial_sum(count.begin(), count.end(), count.begin());

  std::vector<int> order(nt);
  {
    std::vector<int> next(count.begin(), count.end() - 1);
    for (std::size_t t = 0; t < nt; ++t) {
      order[next[tri_col_[t]]++] = static_cast<int>(t);
    }
  }

  col_start_.assign(static_cast<std::size_t>(cols_) + 1, 0);
  row_index_.reserve(nt);
  values_.reserve(nt);
  for (int j = 0; j < cols_; ++j) {
    auto begin = order.begin() + count[j];
    auto end = order.begin() + count[j + 1];
    std::sort(begin, end, [&](int a, int b) { return tri_row_[a] < tri_row_[b]; });
    for (auto it = begin; it != end;) {
      const int row = tri_row_[*it];
      double sum = 0.0;
      do {
        sum += tri_val_[*it];
        ++it;
      } while (it != end && tri_row_[*it] == row);
      if (sum != 0.0) {
        row_index_.push_back(row);
        values_.push_back(sum);
      }
    }
    col_start_[j + 1] = static_cast<int>(values_.size());
  }

  tri_row_.clear();
  tri_row_.shrink_to_fit();
  tri_col_.clear();
  tri_col_.shrink_to_fit();
  tri_val_.clear();
  tri_val_.shrink_to_fit();
  compressed_ = true;
}

Eigen::MatrixXd SparseMatrix::dense() const {
  if (!compressed_) {
    throw std::logic_error("SparseMatrix::dense requires compress()");
  }
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(rows_, cols_);
  for (int j = 0; j < cols_; ++j) {
    auto rows = col_rows(j);
    auto vals = col_values(j);
    for (std::size_t t = 0; t < rows.size(); ++t) D(rows[t], j) = vals[t];
  }
  return D;
}

Eigen::VectorXd SparseMatrix::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(rows_);
  for (int j = 0; j < cols_; ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    auto rows = col_rows(j);
    auto vals = col_values(j);
    for (std::size_t t = 0; t < rows.size(); ++t) y[rows[t]] += vals[t] * xj;
  }
  return y;
}

Eigen::VectorXd SparseMatrix::multiply_transpose(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y(cols_);
  for (int j = 0; j < cols_; ++j) {
    auto rows = col_rows(j);
    auto vals = col_values(j);
    double s = 0.0;
    for (std::size_t t = 0; t < rows.size(); ++t) s += vals[t] * x[rows[t]];
    y[j] = s;
  }
  return y;
}

SparseMatrix SparseMatrix::from_dense(const Eigen::MatrixXd& A) {
  SparseMatrix S(static_cast<int>(A.rows()), static_cast<int>(A.cols()));
  for (int j = 0; j < A.cols(); ++j) {
    for (int i = 0; i < A.rows(); ++i) {
      if (A(i, j) != 0.0) S.add(i, j, A(i, j));
    }
  }
  S.compress();
  return S;
}

}  // namespace cslp
