#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

namespace cslp {

// Column-compressed sparse matrix with a triplet build phase.
//
// Build: add(row, col, value) in any order, then compress(). Compression
// sums duplicate (row, col) pairs, drops entries that are exactly zero, and
// sorts row indices within each column. Queries require a compressed matrix.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nnz() const { return static_cast<int>(values_.size()); }
  bool compressed() const { return compressed_; }

  void add(int row, int col, double value);
  void compress();

  // Column access, compressed only.
  std::span<const int> col_rows(int j) const {
    return {row_index_.data() + col_start_[j],
            static_cast<std::size_t>(col_start_[j + 1] - col_start_[j])};
  }
  std::span<const double> col_values(int j) const {
    return {values_.data() + col_start_[j],
            static_cast<std::size_t>(col_start_[j + 1] - col_start_[j])};
  }
  int col_nnz(int j) const { return col_start_[j + 1] - col_start_[j]; }

  const std::vector<int>& col_start() const { return col_start_; }
  const std::vector<int>& row_index() const { return row_index_; }
  const std::vector<double>& values() const { return values_; }

  Eigen::MatrixXd dense() const;

  // y = A * x and y = A^T * x over the compressed storage.
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd multiply_transpose(const Eigen::VectorXd& x) const;

  static SparseMatrix from_dense(const Eigen::MatrixXd& A);

 private:
  int rows_ = 0;
  int cols_ = 0;
  bool compressed_ = false;
  // Triplets before compress(), CSC after.
  std::vector<int> tri_row_;
  std::vector<int> tri_col_;
  std::vector<double> tri_val_;
  std::vector<int> col_start_;
  std::vector<int> row_index_;
  std::vector<double> values_;
};

}  // namespace cslp
