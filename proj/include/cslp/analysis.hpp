#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

namespace cslp {

struct RecoveryReport {
  double rel_l2_error = 0.0;  // ||xhat - x0||_2 / max(||x0||_2, tiny)
  bool exact = false;         // relative inf-norm error <= recovery_tol
  bool support_match = false;
};

// exact uses the relative inf norm; support_match asks that off-support
// entries stay below tau = recovery_tol * max(||x0||_inf, tiny) and
// on-support entries land within tau of the truth, so exact always implies
// support_match.
RecoveryReport check_recovery(const Eigen::VectorXd& xhat, const Eigen::VectorXd& x0,
                              double recovery_tol = 1e-4);

struct RipEstimate {
  int k = 0;
  double delta = 0.0;
  std::vector<int> extremal;  // column subset attaining delta
};

// Exhaustive restricted-isometry constant: for every k-column submatrix,
// delta_S = max(sigma_max^2 - 1, 1 - sigma_min^2) of its Gram spectrum, and
// delta_k is the largest over subsets. Throws when C(cols, k) exceeds cap.
RipEstimate rip_bruteforce(const Eigen::MatrixXd& M, int k, std::int64_t cap = 200000);

// Checks 1 + delta_k(B (x) A) <= (1 + delta_k(A)) * (1 + delta_k(B)), all
// three constants by brute force.
bool kron_rip_check(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, int k,
                    double slack = 1e-10, std::int64_t cap = 200000);

// Measurement-count bounds, natural logarithm throughout.
// ceil(30 k ln(n/k)), requires 1 <= k < n.
long bound_vector_m(double k, double n);
// ceil(225 k^2 ln(n/k^2)^2), requires k^2 < n.
long bound_kcs_m(double k, double n);
// ceil(C k ln(n_i / k)) per side, requires C > 28.1 and k < min(n1, n2).
std::pair<long, long> bound_kcs_sides(double k, double n1, double n2, double C);

struct SuccessBounds {
  double rho_bound = 0.0;     // 1 - rho(m1, m2)
  double simple_bound = 0.0;  // 1 - 4 exp(-0.1 sqrt(m1 m2))
  double rate = 0.0;          // exponent rate 0.239 - 6.7 / C
};

// rho(m1, m2) = 2 exp(-(0.239 - 6.7/C) m1) + 2 exp(-(0.239 - 6.7/C) m2).
SuccessBounds success_prob_bounds(double m1, double m2, double C);

std::int64_t binomial_or_cap(int n, int k, std::int64_t cap);

}  // namespace cslp
