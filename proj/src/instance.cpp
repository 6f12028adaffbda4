#include "cslp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cslp/rng.hpp"

namespace cslp {

VectorXd gen_sparse_signal(const SignalSpec& spec) {
  if (spec.n < 0 || spec.k < 0 || spec.k > spec.n) {
    throw std::invalid_argument("gen_sparse_signal: need 0 <= k <= n");
  }
  SplitMix64 rng(spec.seed);
  VectorXd x = VectorXd::Zero(spec.n);

  std::vector<int> idx(spec.n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < spec.k; ++i) {
    const int j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(spec.n - i)));
    std::swap(idx[i], idx[j]);
  }
  std::sort(idx.begin(), idx.begin() + spec.k);

  for (int i = 0; i < spec.k; ++i) {
    double a;
    if (spec.amplitude_model == AmplitudeModel::unit_signs) {
      a = rng.next_bool() ? 1.0 : -1.0;
    } else {
      do {
        a = rng.next_gaussian();
      } while (a == 0.0);  // keep the nonzero count exact
    }
    x[idx[i]] = a;
  }
  return x;
}

MatrixXd gen_sensing_matrix(const SensingEnsemble& ens) {
  if (ens.rows <= 0 || ens.cols <= 0) {
    throw std::invalid_argument("gen_sensing_matrix: dimensions must be positive");
  }
  SplitMix64 rng(ens.seed);
  MatrixXd A(ens.rows, ens.cols);
  const double scale = 1.0 / std::sqrt(static_cast<double>(ens.rows));
  double* data = A.data();
  const Eigen::Index total = A.size();
  if (ens.kind == EnsembleKind::gaussian) {
    for (Eigen::Index t = 0; t < total; ++t) data[t] = scale * rng.next_gaussian();
  } else {
    for (Eigen::Index t = 0; t < total; ++t) data[t] = rng.next_bool() ? scale : -scale;
  }
  return A;
}

VectorInstance make_vector_instance(const SensingEnsemble& ens, const SignalSpec& spec) {
  if (ens.cols != spec.n) {
    throw std::invalid_argument("make_vector_instance: ensemble cols must equal signal length");
  }
  VectorInstance inst;
  inst.A = gen_sensing_matrix(ens);
  inst.x0 = gen_sparse_signal(spec);
  inst.y = inst.A * inst.x0;
  return inst;
}

KcsInstance make_kcs_instance(const SensingEnsemble& ens_a, const SensingEnsemble& ens_b,
                              const SignalSpec& spec) {
  if (ens_a.cols * ens_b.cols != spec.n) {
    throw std::invalid_argument("make_kcs_instance: need n == n1 * n2");
  }
  KcsInstance inst;
  inst.A = gen_sensing_matrix(ens_a);
  inst.B = gen_sensing_matrix(ens_b);
  inst.X0 = unvec(gen_sparse_signal(spec), ens_a.cols, ens_b.cols);
  inst.Y = apply_kcs(inst.A, inst.X0, inst.B);
  return inst;
}

VectorInstance vector_form_of(const KcsInstance& inst) {
  VectorInstance v;
  v.A = kron(inst.B, inst.A);
  v.x0 = vec(inst.X0);
  // vec(Y) rather than A*x0 so both formulations see bitwise-identical
  // observations; the difference is dense-multiply roundoff only.
  v.y = vec(inst.Y);
  return v;
}

}  // namespace cslp
