#include "cslp/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cslp/matrix_ops.hpp"

namespace cslp {

namespace {
constexpr double kTiny = 1e-300;
}

RecoveryReport check_recovery(const Eigen::VectorXd& xhat, const Eigen::VectorXd& x0,
                              double recovery_tol) {
  if (xhat.size() != x0.size()) {
    throw std::invalid_argument("check_recovery: length mismatch");
  }
  RecoveryReport rep;
  rep.rel_l2_error = (xhat - x0).norm() / std::max(x0.norm(), kTiny);

  const double scale = std::max(x0.size() > 0 ? x0.cwiseAbs().maxCoeff() : 0.0, kTiny);
  const double tau = recovery_tol * scale;
  const double inf_err = x0.size() > 0 ? (xhat - x0).cwiseAbs().maxCoeff() : 0.0;
  rep.exact = inf_err <= tau;

  rep.support_match = true;
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    if (x0[i] == 0.0 ? std::abs(xhat[i]) > tau : std::abs(xhat[i] - x0[i]) > tau) {
      rep.support_match = false;
      break;
    }
  }
  return rep;
}

std::int64_t binomial_or_cap(int n, int k, std::int64_t cap) {
  std::int64_t b = 1;
  for (int i = 1; i <= k; ++i) {
    b = b * (n - k + i) / i;  // exact: product of i consecutive integers is divisible by i!
    if (b > cap) return cap + 1;
  }
  return b;
}

RipEstimate rip_bruteforce(const Eigen::MatrixXd& M, int k, std::int64_t cap) {
  const int n = static_cast<int>(M.cols());
  if (k < 1 || k > n) {
    throw std::invalid_argument("rip_bruteforce: need 1 <= k <= cols");
  }
  if (binomial_or_cap(n, k, cap) > cap) {
    throw std::runtime_error("rip_bruteforce: enumeration cap exceeded");
  }

  RipEstimate est;
  est.k = k;
  est.delta = 0.0;

  std::vector<int> subset(k);
  std::iota(subset.begin(), subset.end(), 0);
  Eigen::MatrixXd cols(M.rows(), k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;

  for (;;) {
    for (int t = 0; t < k; ++t) cols.col(t) = M.col(subset[t]);
    const Eigen::MatrixXd gram = cols.transpose() * cols;
    eig.compute(gram, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    const double delta_s = std::max(hi - 1.0, 1.0 - lo);
    if (delta_s > est.delta) {
      est.delta = delta_s;
      est.extremal = subset;
    }

    // Advance to the next k-subset in lexicographic order.
    int t = k - 1;
    while (t >= 0 && subset[t] == n - k + t) --t;
    if (t < 0) break;
    ++subset[t];
    for (int u = t + 1; u < k; ++u) subset[u] = subset[u - 1] + 1;
  }
  return est;
}

bool kron_rip_check(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, int k,
                    double slack, std::int64_t cap) {
  const double da = rip_bruteforce(A, k, cap).delta;
  const double db = rip_bruteforce(B, k, cap).delta;
  const double du = rip_bruteforce(kron(B, A), k, cap).delta;
  return 1.0 + du <= (1.0 + da) * (1.0 + db) + slack;
}

long bound_vector_m(double k, double n) {
  if (!(k >= 1.0) || !(k < n)) {
    throw std::invalid_argument("bound_vector_m: need 1 <= k < n");
  }
  return static_cast<long>(std::ceil(30.0 * k * std::log(n / k)));
}

long bound_kcs_m(double k, double n) {
  if (!(k >= 1.0) || !(k * k < n)) {
    throw std::invalid_argument("bound_kcs_m: need k^2 < n");
  }
  const double l = std::log(n / (k * k));
  return static_cast<long>(std::ceil(225.0 * k * k * l * l));
}

std::pair<long, long> bound_kcs_sides(double k, double n1, double n2, double C) {
  if (!(C > 28.1)) {
    throw std::invalid_argument("bound_kcs_sides: need C > 28.1");
  }
  if (!(k >= 1.0) || !(k < n1) || !(k < n2)) {
    throw std::invalid_argument("bound_kcs_sides: need 1 <= k < min(n1, n2)");
  }
  return {static_cast<long>(std::ceil(C * k * std::log(n1 / k))),
          static_cast<long>(std::ceil(C * k * std::log(n2 / k)))};
}

SuccessBounds success_prob_bounds(double m1, double m2, double C) {
  if (!(C > 28.1)) {
    throw std::invalid_argument("success_prob_bounds: need C > 28.1");
  }
  SuccessBounds out;
  out.rate = 0.239 - 6.7 / C;
  const double rho = 2.0 * std::exp(-out.rate * m1) + 2.0 * std::exp(-out.rate * m2);
  out.rho_bound = 1.0 - rho;
  out.simple_bound = 1.0 - 4.0 * std::exp(-0.1 * std::sqrt(m1 * m2));
  return out;
}

}  // namespace cslp
