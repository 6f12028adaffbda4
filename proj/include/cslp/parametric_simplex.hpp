#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <limits>
#include <vector>

#include "cslp/basis_factor.hpp"
#include "cslp/lp_model.hpp"
#include "cslp/solve_report.hpp"

namespace cslp {

// Primal simplex on the parametric cost (c_D + mu * c_P), driving mu from
// +infinity toward zero. The sign-of-rhs basis is optimal for large mu; each
// pivot happens at the largest mu where some reduced cost turns negative,
// and the run stops once every eps variable sits at zero, at which point the
// x part minimizes the l1 norm subject to the measurements.
struct SimplexOptions {
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  double piv_tol = 1e-10;
  double eps_tol = 1e-8;
  int refactor_every = 50;
  long max_pivots = 0;         // 0 means 20 * (rows + 1)
  double time_limit_sec = 0.0;  // 0 means none
  bool check_feasibility = false;  // verify basic values stay >= -feas_tol each pivot
  std::ostream* trace = nullptr;   // per-pivot CSV: pivot,mu_low,entering,leaving,objective
};

enum class ColStatus : std::uint8_t { nonbasic, basic, free_in_basis };

struct SimplexState {
  std::vector<int> basic_cols;  // LP column occupying each row slot
  std::vector<ColStatus> col_status;
  Eigen::VectorXd basic_values;
  FactorizedBasis factor;

  double mu_low = 0.0;
  double mu_high = std::numeric_limits<double>::infinity();
  long pivots = 0;
  int refactorizations = 0;
  bool bland_mode = false;  // set after a degenerate step, per the tie-break rule

  // Pricing cache filled by mu_interval and consumed by choose_entering.
  bool cache_valid = false;
  Eigen::VectorXd red_cost_d, red_cost_p;
  std::vector<int> binding;  // nonbasic columns whose reduced cost vanishes at mu_low
};

// Basis {eps+_i : y_i >= 0} u {eps-_i : y_i < 0} at values |y_i|; the
// Kronecker form additionally makes every z column basic at value 0, which
// keeps the basis a permuted triangle.
SimplexState init_basis(const ParametricLp& lp);

// Optimality interval of the current basis. Returns (0, +inf) once every
// eps-class basic value is at most eps_tol: the homotopy target is reached
// and no further reduction of mu is needed.
std::pair<double, double> mu_interval(SimplexState& state, const ParametricLp& lp,
                                      double eps_tol = 1e-8, double opt_tol = 1e-9);

// A binding column at mu_low: zero reduced cost there, negative below.
// Steepest parametric rate wins, lowest index on ties; after a degenerate
// pivot the lowest binding index wins outright.
int choose_entering(SimplexState& state, const ParametricLp& lp, double mu_low);

struct RatioResult {
  bool unbounded = false;
  int leaving_pos = -1;   // row slot of the leaving variable
  double step = 0.0;
  Eigen::VectorXd direction;  // B^{-1} times the entering column
};

// Leaving row = argmin of basic_value / direction over direction > piv_tol,
// lowest row slot on ties; free (z) variables never leave.
RatioResult ratio_test(SimplexState& state, const ParametricLp& lp, int entering,
                       double piv_tol = 1e-10);

// One basis exchange including the eta update (or scheduled refactorization).
// Returns false on a factorization failure.
bool apply_pivot(SimplexState& state, const ParametricLp& lp, int entering,
                 const RatioResult& ratio, const SimplexOptions& opts);

SolveReport solve_parametric(const ParametricLp& lp, const SimplexOptions& opts = {});

// Current values of all LP columns (nonbasic at zero).
Eigen::VectorXd full_primal(const SimplexState& state, const ParametricLp& lp);

}  // namespace cslp
