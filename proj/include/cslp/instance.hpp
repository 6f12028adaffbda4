#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "cslp/matrix_ops.hpp"

namespace cslp {

enum class AmplitudeModel { unit_signs, standard_gaussian };
enum class EnsembleKind { gaussian, rademacher };

struct SignalSpec {
  int n = 0;
  int k = 0;
  AmplitudeModel amplitude_model = AmplitudeModel::standard_gaussian;
  std::uint64_t seed = 0;
};

// Entry law: gaussian is N(0, 1/m); rademacher is +-1/sqrt(m) with equal
// probability. Both have variance 1/m, so E||column||^2 = 1.
struct SensingEnsemble {
  EnsembleKind kind = EnsembleKind::gaussian;
  int rows = 0;
  int cols = 0;
  std::uint64_t seed = 0;
};

struct VectorInstance {
  MatrixXd A;   // m x n
  VectorXd y;   // m, equals A * x0 up to roundoff
  VectorXd x0;  // n, ground truth
};

struct KcsInstance {
  MatrixXd A;   // m1 x n1
  MatrixXd B;   // m2 x n2
  MatrixXd X0;  // n1 x n2, vec(X0) has exactly k nonzeros
  MatrixXd Y;   // m1 x m2, equals A * X0 * B^T
};

// Exactly k nonzeros on a support drawn uniformly without replacement
// (partial Fisher-Yates, support sorted before amplitudes are assigned).
VectorXd gen_sparse_signal(const SignalSpec& spec);

// Deterministic for a fixed (kind, dims, seed); entries are drawn in
// column-major order.
MatrixXd gen_sensing_matrix(const SensingEnsemble& ens);

VectorInstance make_vector_instance(const SensingEnsemble& ens, const SignalSpec& spec);

KcsInstance make_kcs_instance(const SensingEnsemble& ens_a, const SensingEnsemble& ens_b,
                              const SignalSpec& spec);

// The same measurements viewed as a vector problem: sensing matrix B (x) A,
// observations vec(Y), ground truth vec(X0). Used to compare formulations on
// identical data.
VectorInstance vector_form_of(const KcsInstance& inst);

}  // namespace cslp
