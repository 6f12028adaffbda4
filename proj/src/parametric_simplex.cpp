#include "cslp/parametric_simplex.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace cslp {

namespace {

double objective_at(const SimplexState& state, const ParametricLp& lp, double mu) {
  double obj = 0.0;
  for (int i = 0; i < static_cast<int>(state.basic_cols.size()); ++i) {
    const int j = state.basic_cols[i];
    obj += (lp.cost_penalty[j] + mu * lp.cost_sparsity[j]) * state.basic_values[i];
  }
  return obj;
}

Eigen::VectorXd dense_column(const ParametricLp& lp, int j) {
  Eigen::VectorXd col = Eigen::VectorXd::Zero(lp.rows());
  auto rows = lp.constraints.col_rows(j);
  auto vals = lp.constraints.col_values(j);
  for (std::size_t t = 0; t < rows.size(); ++t) col[rows[t]] = vals[t];
  return col;
}

bool refactorize(SimplexState& state, const ParametricLp& lp) {
  state.refactorizations++;
  if (!state.factor.factorize(lp.constraints, state.basic_cols)) return false;
  // Recompute basic values from the fresh factors to purge update drift.
  Eigen::VectorXd values = lp.rhs;
  state.factor.solve(values);
  state.basic_values = values;
  return true;
}

}  // namespace

SimplexState init_basis(const ParametricLp& lp) {
  const LpShape& sh = lp.shape;
  const int r = lp.rows();
  const int nz = sh.num_z();

  SimplexState state;
  state.basic_cols.resize(r);
  state.col_status.assign(lp.cols(), ColStatus::nonbasic);
  state.basic_values = Eigen::VectorXd::Zero(r);

  // z rows first (Kronecker form only), then the eps rows by sign of rhs;
  // ties at zero go to eps+.
  for (int j = 0; j < nz; ++j) {
    state.basic_cols[j] = sh.z_begin() + j;
    state.col_status[sh.z_begin() + j] = ColStatus::free_in_basis;
    state.basic_values[j] = 0.0;
  }
  for (int i = 0; i < sh.num_eps(); ++i) {
    const double yi = lp.rhs[nz + i];
    const int col = yi >= 0.0 ? sh.ep_begin() + i : sh.em_begin() + i;
    state.basic_cols[nz + i] = col;
    state.col_status[col] = ColStatus::basic;
    state.basic_values[nz + i] = std::abs(yi);
  }

  refactorize(state, lp);
  state.refactorizations = 0;  // the initial factorization is not a refactorization
  return state;
}

std::pair<double, double> mu_interval(SimplexState& state, const ParametricLp& lp,
                                      double eps_tol, double opt_tol) {
  const double inf = std::numeric_limits<double>::infinity();

  // Homotopy complete: every eps-class basic variable is (numerically) zero,
  // so the current x already solves the measurement-feasible l1 problem.
  double max_eps = 0.0;
  for (int i = 0; i < static_cast<int>(state.basic_cols.size()); ++i) {
    const VarClass cls = lp.meta.var_class[state.basic_cols[i]];
    if (cls == VarClass::eps_plus || cls == VarClass::eps_minus) {
      max_eps = std::max(max_eps, std::abs(state.basic_values[i]));
    }
  }
  if (max_eps <= eps_tol) {
    state.cache_valid = false;
    state.binding.clear();
    state.mu_low = 0.0;
    state.mu_high = inf;
    return {0.0, inf};
  }

  if (!state.factor.ok()) {
    throw std::runtime_error("mu_interval: basis factorization is not available");
  }

  // Duals for both cost layers: y_D = B^{-T} c_D|B, y_P = B^{-T} c_P|B.
  const int r = lp.rows();
  Eigen::VectorXd dual_d(r), dual_p(r);
  for (int i = 0; i < r; ++i) {
    dual_d[i] = lp.cost_penalty[state.basic_cols[i]];
    dual_p[i] = lp.cost_sparsity[state.basic_cols[i]];
  }
  state.factor.solve_transpose(dual_d);
  state.factor.solve_transpose(dual_p);

  const int c = lp.cols();
  state.red_cost_d.resize(c);
  state.red_cost_p.resize(c);
  double mu_low = 0.0;
  double mu_high = inf;

  for (int j = 0; j < c; ++j) {
    if (state.col_status[j] != ColStatus::nonbasic) {
      state.red_cost_d[j] = 0.0;
      state.red_cost_p[j] = 0.0;
      continue;
    }
    auto rows = lp.constraints.col_rows(j);
    auto vals = lp.constraints.col_values(j);
    double dot_d = 0.0, dot_p = 0.0;
    for (std::size_t t = 0; t < rows.size(); ++t) {
      dot_d += vals[t] * dual_d[rows[t]];
      dot_p += vals[t] * dual_p[rows[t]];
    }
    const double dd = lp.cost_penalty[j] - dot_d;
    const double dp = lp.cost_sparsity[j] - dot_p;
    state.red_cost_d[j] = dd;
    state.red_cost_p[j] = dp;

    // d_j(mu) = dd + mu * dp >= 0 gives a lower bound when dp > 0 and an
    // upper bound when dp < 0.
    if (dp > opt_tol) {
      mu_low = std::max(mu_low, -dd / dp);
    } else if (dp < -opt_tol) {
      mu_high = std::min(mu_high, -dd / dp);
    }
  }

  state.binding.clear();
  const double tie_tol = opt_tol * (1.0 + std::abs(mu_low));
  if (mu_low > 0.0) {
    for (int j = 0; j < c; ++j) {
      if (state.col_status[j] != ColStatus::nonbasic) continue;
      const double dp = state.red_cost_p[j];
      if (dp > opt_tol && -state.red_cost_d[j] / dp >= mu_low - tie_tol) {
        state.binding.push_back(j);
      }
    }
  }
  state.cache_valid = true;
  state.mu_low = mu_low;
  state.mu_high = mu_high;
  return {mu_low, mu_high};
}

int choose_entering(SimplexState& state, const ParametricLp& lp, double mu_low) {
  if (!state.cache_valid || std::abs(state.mu_low - mu_low) >
                                1e-9 * (1.0 + std::abs(mu_low))) {
    mu_interval(state, lp);
  }
  if (state.binding.empty()) return -1;
  if (state.bland_mode) {
    return state.binding.front();  // binding list is built in column order
  }
  int best = state.binding.front();
  double best_rate = state.red_cost_p[best];
  for (int j : state.binding) {
    if (state.red_cost_p[j] > best_rate) {
      best = j;
      best_rate = state.red_cost_p[j];
    }
  }
  return best;
}

RatioResult ratio_test(SimplexState& state, const ParametricLp& lp, int entering,
                       double piv_tol) {
  RatioResult res;
  res.direction = dense_column(lp, entering);
  state.factor.solve(res.direction);

  const int r = lp.rows();
  double best_ratio = std::numeric_limits<double>::infinity();
  int best_pos = -1;
  for (int i = 0; i < r; ++i) {
    if (state.col_status[state.basic_cols[i]] == ColStatus::free_in_basis) continue;
    const double wi = res.direction[i];
    if (wi <= piv_tol) continue;
    const double ratio = std::max(state.basic_values[i], 0.0) / wi;
    if (ratio < best_ratio) {
      best_ratio = ratio;
      best_pos = i;
    }
  }
  if (best_pos < 0) {
    res.unbounded = true;
    return res;
  }
  res.leaving_pos = best_pos;
  res.step = best_ratio;
  return res;
}

bool apply_pivot(SimplexState& state, const ParametricLp& lp, int entering,
                 const RatioResult& ratio, const SimplexOptions& opts) {
  const int p = ratio.leaving_pos;
  const int leaving_col = state.basic_cols[p];

  state.basic_values -= ratio.step * ratio.direction;
  state.basic_values[p] = ratio.step;
  state.basic_cols[p] = entering;
  state.col_status[leaving_col] = ColStatus::nonbasic;
  state.col_status[entering] =
      lp.meta.var_class[entering] == VarClass::z_free ? ColStatus::free_in_basis
                                                      : ColStatus::basic;
  state.pivots++;
  state.bland_mode = ratio.step <= opts.feas_tol;
  state.cache_valid = false;

  if (state.factor.updates_since_refactor() + 1 >= opts.refactor_every) {
    if (!refactorize(state, lp)) return false;
  } else if (!state.factor.push_eta(p, ratio.direction, opts.piv_tol)) {
    if (!refactorize(state, lp)) return false;
  }

  if (opts.check_feasibility) {
    for (int i = 0; i < static_cast<int>(state.basic_cols.size()); ++i) {
      if (state.col_status[state.basic_cols[i]] == ColStatus::free_in_basis) continue;
      if (state.basic_values[i] < -opts.feas_tol) {
        throw std::runtime_error("apply_pivot: primal feasibility lost");
      }
    }
  }
  return true;
}

Eigen::VectorXd full_primal(const SimplexState& state, const ParametricLp& lp) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(lp.cols());
  for (int i = 0; i < static_cast<int>(state.basic_cols.size()); ++i) {
    v[state.basic_cols[i]] = state.basic_values[i];
  }
  return v;
}

SolveReport solve_parametric(const ParametricLp& lp, const SimplexOptions& opts) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(clock::now() - t0).count();
  };

  SolveReport report;
  const long max_pivots =
      opts.max_pivots > 0 ? opts.max_pivots : 20L * (lp.rows() + 1);

  SimplexState state = init_basis(lp);
  if (!state.factor.ok()) {
    report.status = SolveStatus::numerical_failure;
    report.wall_seconds = elapsed();
    return report;
  }
  if (opts.trace) {
    *opts.trace << "pivot,mu_low,entering,leaving,objective\n";
  }

  double mu_prev = std::numeric_limits<double>::infinity();
  SolveStatus status = SolveStatus::optimal;
  double mu_final = 0.0;

  for (;;) {
    if (opts.time_limit_sec > 0.0 && elapsed() > opts.time_limit_sec) {
      status = SolveStatus::time_limit;
      break;
    }

    auto [mu_low, mu_high] = mu_interval(state, lp, opts.eps_tol, opts.opt_tol);
    (void)mu_high;
    // Breakpoints never increase along the homotopy; drift past tolerance
    // indicates the factorization has degraded.
    if (mu_low > mu_prev * (1.0 + 1e-7) + opts.opt_tol) {
      if (!refactorize(state, lp)) {
        status = SolveStatus::numerical_failure;
        break;
      }
      std::tie(mu_low, mu_high) = mu_interval(state, lp, opts.eps_tol, opts.opt_tol);
    }
    report.mu_trace.push_back(mu_low);
    mu_final = mu_low;
    if (mu_low <= opts.opt_tol) {
      status = SolveStatus::optimal;
      break;
    }
    if (state.pivots >= max_pivots) {
      status = SolveStatus::max_pivots;
      break;
    }

    const int entering = choose_entering(state, lp, mu_low);
    if (entering < 0) {
      status = SolveStatus::numerical_failure;
      break;
    }
    RatioResult ratio = ratio_test(state, lp, entering, opts.piv_tol);
    if (ratio.unbounded) {
      // The parametric objective is bounded below by zero, so an unbounded
      // ray can only come from numerical trouble.
      status = SolveStatus::numerical_failure;
      break;
    }
    const int leaving_col = state.basic_cols[ratio.leaving_pos];
    if (!apply_pivot(state, lp, entering, ratio, opts)) {
      status = SolveStatus::numerical_failure;
      break;
    }
    if (opts.trace) {
      *opts.trace << state.pivots << ',' << mu_low << ',' << entering << ','
                  << leaving_col << ',' << objective_at(state, lp, mu_low) << '\n';
    }
    mu_prev = mu_low;
  }

  report.status = status;
  report.steps = state.pivots;
  report.refactorizations = state.refactorizations;
  report.final_mu = mu_final;
  const Eigen::VectorXd v = full_primal(state, lp);
  report.solution = extract_solution(lp, v);
  report.eps_abs_max = report.solution.eps_abs_max;
  // Both columns of a split pair in the basis would make it singular, so the
  // overlap can only be roundoff on the stored values.
  report.split_pairs_exclusive = true;
  for (int j = 0; j < lp.shape.signal_len(); ++j) {
    if (std::min(v[lp.shape.xp_begin() + j], v[lp.shape.xm_begin() + j]) > 1e-9) {
      report.split_pairs_exclusive = false;
      break;
    }
  }
  report.wall_seconds = elapsed();
  return report;
}

}  // namespace cslp
