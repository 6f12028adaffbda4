#include "cslp/interior_point.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <ostream>
#include <vector>

namespace cslp {

namespace {

// Columns of the parametric LP that survive into standard form, with the
// sign each split copy carries.
struct StdColumn {
  int origin;
  double sign;
};

std::vector<StdColumn> standard_columns(const ParametricLp& lp, StandardFormMode mode) {
  const LpShape& sh = lp.shape;
  std::vector<StdColumn> cols;
  for (int j = 0; j < sh.num_z(); ++j) cols.push_back({sh.z_begin() + j, 1.0});
  for (int j = 0; j < sh.num_z(); ++j) cols.push_back({sh.z_begin() + j, -1.0});
  for (int j = 0; j < 2 * sh.signal_len(); ++j) cols.push_back({sh.xp_begin() + j, 1.0});
  if (mode == StandardFormMode::fixed_mu) {
    for (int j = 0; j < 2 * sh.num_eps(); ++j) cols.push_back({sh.ep_begin() + j, 1.0});
  }
  return cols;
}

std::vector<int> split_partners(const LpShape& sh, StandardFormMode mode) {
  const int nz = sh.num_z();
  const int n = sh.signal_len();
  const int total = 2 * nz + 2 * n +
                    (mode == StandardFormMode::fixed_mu ? 2 * sh.num_eps() : 0);
  std::vector<int> partner(total, -1);
  for (int j = 0; j < nz; ++j) {
    partner[j] = nz + j;
    partner[nz + j] = j;
  }
  for (int j = 0; j < n; ++j) {
    partner[2 * nz + j] = 2 * nz + n + j;
    partner[2 * nz + n + j] = 2 * nz + j;
  }
  if (mode == StandardFormMode::fixed_mu) {
    const int base = 2 * nz + 2 * n;
    const int m = sh.num_eps();
    for (int i = 0; i < m; ++i) {
      partner[base + i] = base + m + i;
      partner[base + m + i] = base + i;
    }
  }
  return partner;
}

// Exactly duplicated rows (same pattern, values, and rhs) are dropped; any
// remaining rank deficiency surfaces as a factorization failure. Rows are
// grouped by hash first so the common duplicate-free case stays cheap.
std::vector<int> duplicate_rows(const SparseMatrix& A, const Eigen::VectorXd& b) {
  const int r = A.rows();
  std::vector<std::vector<std::pair<int, double>>> row_entries(r);
  for (int j = 0; j < A.cols(); ++j) {
    auto rows = A.col_rows(j);
    auto vals = A.col_values(j);
    for (std::size_t t = 0; t < rows.size(); ++t) {
      row_entries[rows[t]].emplace_back(j, vals[t]);
    }
  }
  const auto mix = [](std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    return h;
  };
  std::map<std::uint64_t, std::vector<int>> buckets;
  for (int i = 0; i < r; ++i) {
    std::uint64_t h = 0;
    for (const auto& [col, val] : row_entries[i]) {
      h = mix(h, static_cast<std::uint64_t>(col));
      std::uint64_t bits;
      static_assert(sizeof(bits) == sizeof(val));
      std::memcpy(&bits, &val, sizeof(bits));
      h = mix(h, bits);
    }
    std::uint64_t rhs_bits;
    const double rhs = b[i];
    std::memcpy(&rhs_bits, &rhs, sizeof(rhs_bits));
    buckets[mix(h, rhs_bits)].push_back(i);
  }
  std::vector<int> drop;
  for (const auto& [h, members] : buckets) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t bb = 0; bb < a; ++bb) {
        if (row_entries[members[a]] == row_entries[members[bb]] &&
            b[members[a]] == b[members[bb]]) {
          drop.push_back(members[a]);
          break;
        }
      }
    }
  }
  std::sort(drop.begin(), drop.end());
  return drop;
}

}  // namespace

Eigen::VectorXd StandardLp::fold(const Eigen::VectorXd& v_std) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(shape.num_cols());
  for (int t = 0; t < static_cast<int>(origin_col.size()); ++t) {
    v[origin_col[t]] += origin_sign[t] * v_std[t];
  }
  return v;
}

StandardLp to_standard_form(const ParametricLp& lp, StandardFormMode mode, double mu) {
  const auto cols = standard_columns(lp, mode);

  StandardLp slp;
  slp.shape = lp.shape;
  slp.b = lp.rhs;
  slp.split_partner = split_partners(lp.shape, mode);
  slp.origin_col.reserve(cols.size());
  slp.origin_sign.reserve(cols.size());

  SparseMatrix full(lp.rows(), static_cast<int>(cols.size()));
  slp.c.resize(static_cast<Eigen::Index>(cols.size()));
  for (int t = 0; t < static_cast<int>(cols.size()); ++t) {
    const auto& [j, sign] = cols[t];
    slp.origin_col.push_back(j);
    slp.origin_sign.push_back(sign);
    auto rows = lp.constraints.col_rows(j);
    auto vals = lp.constraints.col_values(j);
    for (std::size_t u = 0; u < rows.size(); ++u) {
      full.add(rows[u], t, sign * vals[u]);
    }
    // Split copies share the cost; it is zero on z either way.
    slp.c[t] = mode == StandardFormMode::basis_pursuit
                   ? lp.cost_sparsity[j]
                   : lp.cost_penalty[j] + mu * lp.cost_sparsity[j];
  }
  full.compress();

  const std::vector<int> drop = duplicate_rows(full, slp.b);
  if (drop.empty()) {
    slp.A = std::move(full);
    return slp;
  }

  std::vector<int> new_row(full.rows(), -1);
  int kept = 0;
  std::size_t d = 0;
  for (int i = 0; i < full.rows(); ++i) {
    if (d < drop.size() && drop[d] == i) {
      ++d;
      continue;
    }
    new_row[i] = kept++;
  }
  SparseMatrix compacted(kept, full.cols());
  for (int j = 0; j < full.cols(); ++j) {
    auto rows = full.col_rows(j);
    auto vals = full.col_values(j);
    for (std::size_t t = 0; t < rows.size(); ++t) {
      if (new_row[rows[t]] >= 0) compacted.add(new_row[rows[t]], j, vals[t]);
    }
  }
  compacted.compress();
  Eigen::VectorXd b2(kept);
  for (int i = 0; i < full.rows(); ++i) {
    if (new_row[i] >= 0) b2[new_row[i]] = slp.b[i];
  }
  slp.A = std::move(compacted);
  slp.b = std::move(b2);
  return slp;
}

SolveReport ipm_solve(const StandardLp& slp, const IpmOptions& opts) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(clock::now() - t0).count();
  };

  const int r = slp.A.rows();
  const int n = slp.A.cols();
  const bool dense_path = r <= opts.dense_threshold;

  SolveReport report;
  report.status = SolveStatus::max_pivots;

  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd lam = Eigen::VectorXd::Zero(r);
  Eigen::VectorXd s = Eigen::VectorXd::Ones(n);

  // The cost is scaled to unit max magnitude internally (the primal solution
  // is unchanged); residual and gap tests are relative to the scaled data.
  const double cost_scale = std::max(1.0, slp.c.size() > 0 ? slp.c.cwiseAbs().maxCoeff() : 1.0);
  const Eigen::VectorXd c_scaled = slp.c / cost_scale;

  const double bnorm = 1.0 + slp.b.norm();
  const double cnorm = 1.0 + c_scaled.norm();

  Eigen::MatrixXd Ad;
  Eigen::SparseMatrix<double> As, AsT;
  if (dense_path) {
    Ad = slp.A.dense();
  } else {
    As.resize(r, n);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(slp.A.nnz());
    for (int j = 0; j < n; ++j) {
      auto rows = slp.A.col_rows(j);
      auto vals = slp.A.col_values(j);
      for (std::size_t t = 0; t < rows.size(); ++t) {
        trips.emplace_back(rows[t], j, vals[t]);
      }
    }
    As.setFromTriplets(trips.begin(), trips.end());
    As.makeCompressed();
    AsT = As.transpose();
  }

  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> sparse_llt;
  bool pattern_analyzed = false;
  Eigen::LLT<Eigen::MatrixXd> dense_llt;

  if (opts.log) *opts.log << "iter,primal_res,dual_res,gap\n";

  double mu0 = 0.0;
  // The best iterate seen (by worst relative residual) is what the solver
  // returns; iterations that stop improving it end the run.
  double best_score = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x = x, best_lam = lam, best_s = s;
  int stalled = 0;

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    if (opts.time_limit_sec > 0.0 && elapsed() > opts.time_limit_sec) {
      report.status = SolveStatus::time_limit;
      break;
    }

    const Eigen::VectorXd rb = slp.A.multiply(x) - slp.b;
    const Eigen::VectorXd rc = slp.A.multiply_transpose(lam) + s - c_scaled;
    const double mu = x.dot(s) / n;
    if (iter == 0) mu0 = mu;
    // Near the optimal face the scaling spread drives the normal equations
    // to the edge of positive definiteness in floating point; a small
    // diagonal shift is then legitimate. Early failures stay fatal so rank
    // deficiency is still reported.
    const bool may_regularize = mu <= 1e-4 * mu0;
    const double pres = rb.norm() / bnorm;
    const double dres = rc.norm() / cnorm;
    const double pobj = c_scaled.dot(x);
    const double dobj = slp.b.dot(lam);
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
    const double score = std::max({pres, dres, gap});

    if (opts.log) {
      *opts.log << iter << ',' << pres << ',' << dres << ',' << gap << '\n';
    }
    report.mu_trace.push_back(mu);
    report.steps = iter;

    const bool improved = score < 0.999 * best_score;
    if (score < best_score) {
      best_score = score;
      best_x = x;
      best_lam = lam;
      best_s = s;
    }
    if (score <= opts.tol) {
      report.status = SolveStatus::optimal;
      break;
    }
    stalled = improved ? 0 : stalled + 1;
    if (stalled >= 12) {
      report.status = SolveStatus::numerical_failure;
      break;
    }

    // Scaling d = v/s, clamped only at the extremes representable without
    // poisoning the factorization.
    Eigen::VectorXd d(n);
    for (int j = 0; j < n; ++j) {
      d[j] = std::clamp(x[j] / s[j], 1e-16, 1e16);
    }

    // g = rc - s + sigma*mu/x;  M dlam = -rb - A(d .* g).
    Eigen::VectorXd g = rc - s + (opts.sigma * mu) * x.cwiseInverse();
    Eigen::VectorXd rhs = -rb - slp.A.multiply(d.cwiseProduct(g));

    Eigen::VectorXd dlam(r);
    bool factored = false;
    if (dense_path) {
      Eigen::MatrixXd scaled = Ad * d.cwiseSqrt().asDiagonal();
      Eigen::MatrixXd M0 = Eigen::MatrixXd::Zero(r, r);
      M0.selfadjointView<Eigen::Lower>().rankUpdate(scaled);
      Eigen::MatrixXd M = M0;
      const double diag_scale = M0.diagonal().maxCoeff();
      for (double shift : {0.0, 1e-14, 1e-10, 1e-6}) {
        if (shift > 0.0 && !may_regularize) break;
        if (shift > 0.0) M.diagonal().array() += shift * diag_scale;
        dense_llt.compute(M);
        if (dense_llt.info() == Eigen::Success) {
          factored = true;
          break;
        }
      }
      if (!factored) {
        report.status = SolveStatus::numerical_failure;
        break;
      }
      dlam = dense_llt.solve(rhs);
      // Refine against the unshifted matrix: two rounds remove both the
      // shift bias and most of the factorization roundoff.
      for (int round = 0; round < 2; ++round) {
        const Eigen::VectorXd resid =
            rhs - M0.selfadjointView<Eigen::Lower>() * dlam;
        if (resid.norm() <= 1e-14 * (1.0 + rhs.norm())) break;
        dlam += dense_llt.solve(resid);
      }
      report.factor_nnz = static_cast<long>(r) * (r + 1) / 2;
    } else {
      // d > 0 keeps the product's pattern fixed across iterations, so the
      // symbolic analysis is reused.
      const Eigen::SparseMatrix<double> M0 = (As * d.asDiagonal()) * AsT;
      Eigen::SparseMatrix<double> M = M0;
      if (!pattern_analyzed) {
        sparse_llt.analyzePattern(M);
        pattern_analyzed = true;
      }
      double diag_scale = 0.0;
      for (int i = 0; i < r; ++i) diag_scale = std::max(diag_scale, M.coeff(i, i));
      for (double shift : {0.0, 1e-14, 1e-10, 1e-6}) {
        if (shift > 0.0 && !may_regularize) break;
        if (shift > 0.0) {
          Eigen::SparseMatrix<double> I(r, r);
          I.setIdentity();
          M += (shift * diag_scale) * I;
          sparse_llt.analyzePattern(M);  // the shift may insert diagonal entries
        }
        sparse_llt.factorize(M);
        if (sparse_llt.info() == Eigen::Success) {
          factored = true;
          break;
        }
      }
      if (!factored) {
        report.status = SolveStatus::numerical_failure;
        break;
      }
      dlam = sparse_llt.solve(rhs);
      for (int round = 0; round < 2; ++round) {
        const Eigen::VectorXd resid = rhs - M0 * dlam;
        if (resid.norm() <= 1e-14 * (1.0 + rhs.norm())) break;
        dlam += sparse_llt.solve(resid);
      }
      report.factor_nnz = static_cast<long>(sparse_llt.matrixL().nestedExpression().nonZeros());
    }

    const Eigen::VectorXd at_dlam = slp.A.multiply_transpose(dlam);
    const Eigen::VectorXd dx = d.cwiseProduct(at_dlam + g);
    const Eigen::VectorXd ds = -rc - at_dlam;

    double alpha_p = 1.0, alpha_d = 1.0;
    for (int j = 0; j < n; ++j) {
      if (dx[j] < 0.0) alpha_p = std::min(alpha_p, -x[j] / dx[j]);
      if (ds[j] < 0.0) alpha_d = std::min(alpha_d, -s[j] / ds[j]);
    }
    alpha_p = std::min(1.0, opts.step_fraction * alpha_p);
    alpha_d = std::min(1.0, opts.step_fraction * alpha_d);
    if (alpha_p < 1e-13 && alpha_d < 1e-13) {
      report.status = SolveStatus::numerical_failure;
      break;
    }

    x += alpha_p * dx;
    lam += alpha_d * dlam;
    s += alpha_d * ds;

    // Pair reduction: shrinking both halves of a +/- split leaves Av
    // unchanged (the columns are exact negatives) and lowers the objective,
    // and it stops the halves drifting up together, which is what ruins the
    // scaling matrix on split free variables.
    for (int j = 0; j < n; ++j) {
      const int p = slp.split_partner[j];
      if (p > j) {
        const double delta = 0.5 * std::min(x[j], x[p]);
        if (delta > 0.0) {
          x[j] -= delta;
          x[p] -= delta;
        }
      }
    }
  }
  if (report.status == SolveStatus::max_pivots) {
    report.steps = opts.max_iterations;
  }
  if (report.status != SolveStatus::optimal) {
    x = best_x;
    lam = best_lam;
    s = best_s;
  }

  {
    const double pobj = c_scaled.dot(x);
    report.rel_gap = std::abs(pobj - slp.b.dot(lam)) / (1.0 + std::abs(pobj));
  }
  report.final_mu = x.dot(s) / n;

  const Eigen::VectorXd v = slp.fold(x);
  report.solution = extract_solution(slp.shape, v);
  // With the eps block eliminated the measurement residual plays its role.
  const double resid = (slp.A.multiply(x) - slp.b).cwiseAbs().maxCoeff();
  report.eps_abs_max = std::max(report.solution.eps_abs_max, resid);

  report.split_pairs_exclusive = true;
  const LpShape& sh = slp.shape;
  for (int j = 0; j < sh.signal_len(); ++j) {
    const double xp = v[sh.xp_begin() + j];
    const double xm = v[sh.xm_begin() + j];
    if (std::min(xp, xm) > 1e-6 * std::max(1.0, xp + xm)) {
      report.split_pairs_exclusive = false;
      break;
    }
  }
  report.wall_seconds = elapsed();
  return report;
}

}  // namespace cslp
