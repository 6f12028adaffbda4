#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "cslp/instance.hpp"
#include "cslp/lp_model.hpp"

namespace cslp {

// Plain-text instance files. Vector form:
//
//     m n k seed
//     A, row-major, one line per row
//     y on one line
//     x0 on one line
//
// Kronecker form replaces the header with `m1 m2 n1 n2 k seed` and carries
// A, B, X0, Y in that order. Values are printed with 17 significant digits
// so doubles round-trip exactly; the header distinguishes the two layouts
// by token count.

struct StoredVectorInstance {
  VectorInstance inst;
  int k = 0;
  std::uint64_t seed = 0;
};

struct StoredKcsInstance {
  KcsInstance inst;
  int k = 0;
  std::uint64_t seed = 0;
};

void write_vector_instance(std::ostream& os, const VectorInstance& inst, int k,
                           std::uint64_t seed);
void write_kcs_instance(std::ostream& os, const KcsInstance& inst, int k,
                        std::uint64_t seed);

StoredVectorInstance read_vector_instance(std::istream& is);
StoredKcsInstance read_kcs_instance(std::istream& is);

enum class InstanceKind { vector, kcs };
InstanceKind sniff_instance_kind(std::istream& is);  // rewinds the stream

// LP export for cross-checking with external tools:
//
//     r c nnz
//     nnz lines `row col value` (0-based)
//     r lines of rhs
//     c lines of cost_penalty (the eps weight)
//     c lines of cost_sparsity (the mu weight)
void write_lp(std::ostream& os, const ParametricLp& lp);

struct StoredLp {
  SparseMatrix constraints;
  Eigen::VectorXd rhs, cost_penalty, cost_sparsity;
};
StoredLp read_lp(std::istream& is);

// File-based convenience wrappers; throw std::runtime_error with the path
// on failure.
void save_text(const std::string& path, const std::string& contents);
std::string load_text(const std::string& path);

}  // namespace cslp
