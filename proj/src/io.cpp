#include "cslp/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cslp {

namespace {

void put(std::ostream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  os << buf;
}

void write_matrix(std::ostream& os, const Eigen::MatrixXd& M) {
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) os << ' ';
      put(os, M(i, j));
    }
    os << '\n';
  }
}

void write_vector(std::ostream& os, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ' ';
    put(os, v[i]);
  }
  os << '\n';
}

Eigen::MatrixXd read_matrix(std::istream& is, int rows, int cols) {
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (!(is >> M(i, j))) throw std::runtime_error("instance file: truncated matrix");
    }
  }
  return M;
}

Eigen::VectorXd read_vector(std::istream& is, int len) {
  Eigen::VectorXd v(len);
  for (int i = 0; i < len; ++i) {
    if (!(is >> v[i])) throw std::runtime_error("instance file: truncated vector");
  }
  return v;
}

}  // namespace

void write_vector_instance(std::ostream& os, const VectorInstance& inst, int k,
                           std::uint64_t seed) {
  os << inst.A.rows() << ' ' << inst.A.cols() << ' ' << k << ' ' << seed << '\n';
  write_matrix(os, inst.A);
  write_vector(os, inst.y);
  write_vector(os, inst.x0);
}

void write_kcs_instance(std::ostream& os, const KcsInstance& inst, int k,
                        std::uint64_t seed) {
  os << inst.A.rows() << ' ' << inst.B.rows() << ' ' << inst.A.cols() << ' '
     << inst.B.cols() << ' ' << k << ' ' << seed << '\n';
  write_matrix(os, inst.A);
  write_matrix(os, inst.B);
  write_matrix(os, inst.X0);
  write_matrix(os, inst.Y);
}

StoredVectorInstance read_vector_instance(std::istream& is) {
  StoredVectorInstance out;
  int m = 0, n = 0;
  if (!(is >> m >> n >> out.k >> out.seed)) {
    throw std::runtime_error("instance file: bad vector header");
  }
  out.inst.A = read_matrix(is, m, n);
  out.inst.y = read_vector(is, m);
  out.inst.x0 = read_vector(is, n);
  return out;
}

StoredKcsInstance read_kcs_instance(std::istream& is) {
  StoredKcsInstance out;
  int m1 = 0, m2 = 0, n1 = 0, n2 = 0;
  if (!(is >> m1 >> m2 >> n1 >> n2 >> out.k >> out.seed)) {
    throw std::runtime_error("instance file: bad kcs header");
  }
  out.inst.A = read_matrix(is, m1, n1);
  out.inst.B = read_matrix(is, m2, n2);
  out.inst.X0 = read_matrix(is, n1, n2);
  out.inst.Y = read_matrix(is, m1, m2);
  return out;
}

InstanceKind sniff_instance_kind(std::istream& is) {
  std::string header;
  std::getline(is, header);
  is.seekg(0);
  std::istringstream hs(header);
  int tokens = 0;
  std::string tok;
  while (hs >> tok) ++tokens;
  if (tokens == 4) return InstanceKind::vector;
  if (tokens == 6) return InstanceKind::kcs;
  throw std::runtime_error("instance file: unrecognized header");
}

void write_lp(std::ostream& os, const ParametricLp& lp) {
  const SparseMatrix& A = lp.constraints;
  os << A.rows() << ' ' << A.cols() << ' ' << A.nnz() << '\n';
  for (int j = 0; j < A.cols(); ++j) {
    auto rows = A.col_rows(j);
    auto vals = A.col_values(j);
    for (std::size_t t = 0; t < rows.size(); ++t) {
      os << rows[t] << ' ' << j << ' ';
      put(os, vals[t]);
      os << '\n';
    }
  }
  for (Eigen::Index i = 0; i < lp.rhs.size(); ++i) {
    put(os, lp.rhs[i]);
    os << '\n';
  }
  for (Eigen::Index j = 0; j < lp.cost_penalty.size(); ++j) {
    put(os, lp.cost_penalty[j]);
    os << '\n';
  }
  for (Eigen::Index j = 0; j < lp.cost_sparsity.size(); ++j) {
    put(os, lp.cost_sparsity[j]);
    os << '\n';
  }
}

StoredLp read_lp(std::istream& is) {
  int r = 0, c = 0, nnz = 0;
  if (!(is >> r >> c >> nnz)) throw std::runtime_error("lp file: bad header");
  StoredLp out;
  out.constraints = SparseMatrix(r, c);
  for (int t = 0; t < nnz; ++t) {
    int i = 0, j = 0;
    double v = 0.0;
    if (!(is >> i >> j >> v)) throw std::runtime_error("lp file: truncated triplets");
    out.constraints.add(i, j, v);
  }
  out.constraints.compress();
  out.rhs = read_vector(is, r);
  out.cost_penalty = read_vector(is, c);
  out.cost_sparsity = read_vector(is, c);
  return out;
}

void save_text(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << contents;
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string load_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace cslp
