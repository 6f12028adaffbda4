// Command-line front end: instance generation, single solves with JSON
// reports, the benchmark sweep, and the bound/RIP calculators.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cslp/analysis.hpp"
#include "cslp/bench.hpp"
#include "cslp/instance.hpp"
#include "cslp/interior_point.hpp"
#include "cslp/io.hpp"
#include "cslp/lp_model.hpp"
#include "cslp/parametric_simplex.hpp"
#include "cslp/rng.hpp"

namespace {

using nlohmann::json;

cslp::EnsembleKind parse_ensemble(const std::string& s) {
  if (s == "gaussian") return cslp::EnsembleKind::gaussian;
  if (s == "rademacher") return cslp::EnsembleKind::rademacher;
  throw CLI::ValidationError("--ensemble", "expected gaussian or rademacher");
}

cslp::AmplitudeModel parse_amplitude(const std::string& s) {
  if (s == "standard_gaussian") return cslp::AmplitudeModel::standard_gaussian;
  if (s == "unit_signs") return cslp::AmplitudeModel::unit_signs;
  throw CLI::ValidationError("--amplitude", "expected standard_gaussian or unit_signs");
}

json report_to_json(const cslp::SolveReport& rep, const Eigen::VectorXd* x0,
                    bool full_solution) {
  json j;
  j["status"] = cslp::to_string(rep.status);
  j["steps"] = rep.steps;
  j["refactorizations"] = rep.refactorizations;
  j["wall_seconds"] = rep.wall_seconds;
  j["final_mu"] = rep.final_mu;
  j["eps_abs_max"] = rep.eps_abs_max;
  j["l1_x"] = rep.solution.l1_x;
  j["l1_eps"] = rep.solution.l1_eps;
  j["split_pairs_exclusive"] = rep.split_pairs_exclusive;
  if (rep.factor_nnz > 0) j["factor_nnz"] = rep.factor_nnz;

  json nz = json::array();
  for (Eigen::Index i = 0; i < rep.solution.x.size(); ++i) {
    if (std::abs(rep.solution.x[i]) > 1e-10) {
      nz.push_back({i, rep.solution.x[i]});
    }
  }
  j["x_nonzeros"] = nz;
  if (full_solution) {
    j["x"] = std::vector<double>(rep.solution.x.data(),
                                 rep.solution.x.data() + rep.solution.x.size());
  }
  if (x0 != nullptr) {
    const cslp::RecoveryReport rr = cslp::check_recovery(rep.solution.x, *x0);
    j["recovery"] = {{"rel_l2_error", rr.rel_l2_error},
                     {"exact", rr.exact},
                     {"support_match", rr.support_match}};
  }
  return j;
}

int run_gen(const std::string& type, int m1, int m2, int n1, int n2, int k,
            std::uint64_t seed, const std::string& ensemble, const std::string& amplitude,
            const std::string& out) {
  std::ostringstream os;
  const cslp::EnsembleKind kind = parse_ensemble(ensemble);
  const cslp::AmplitudeModel amp = parse_amplitude(amplitude);
  // Sub-seeds follow the bench convention: one SplitMix64 stream seeded by
  // the user value yields the A, B, and signal seeds.
  cslp::SplitMix64 rng(seed);
  const std::uint64_t sa = rng.next_u64();
  const std::uint64_t sb = rng.next_u64();
  const std::uint64_t sx = rng.next_u64();

  if (type == "vector") {
    const auto inst = cslp::make_vector_instance({kind, m1, n1, sa}, {n1, k, amp, sx});
    cslp::write_vector_instance(os, inst, k, seed);
  } else {
    const auto inst = cslp::make_kcs_instance({kind, m1, n1, sa}, {kind, m2, n2, sb},
                                              {n1 * n2, k, amp, sx});
    cslp::write_kcs_instance(os, inst, k, seed);
  }
  if (out.empty()) {
    std::cout << os.str();
  } else {
    cslp::save_text(out, os.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compressed-sensing LP toolkit: parametric-simplex homotopy, "
               "Kronecker sparse formulation, interior-point solver"};
  app.require_subcommand(1);

  // --- gen ---
  auto* gen = app.add_subcommand("gen", "generate a sensing instance file");
  std::string gen_type = "vector";
  int g_m1 = 0, g_m2 = 1, g_n1 = 0, g_n2 = 1, g_k = 0;
  std::uint64_t g_seed = 1;
  std::string g_ensemble = "gaussian", g_amplitude = "standard_gaussian", g_out;
  gen->add_option("--type", gen_type)->check(CLI::IsMember({"vector", "kcs"}));
  gen->add_option("--m,--m1", g_m1, "rows of A")->required();
  gen->add_option("--m2", g_m2, "rows of B (kcs)");
  gen->add_option("--n,--n1", g_n1, "cols of A")->required();
  gen->add_option("--n2", g_n2, "cols of B (kcs)");
  gen->add_option("--k", g_k, "nonzeros in the signal")->required();
  gen->add_option("--seed", g_seed);
  gen->add_option("--ensemble", g_ensemble);
  gen->add_option("--amplitude", g_amplitude);
  gen->add_option("--out", g_out, "output path (stdout when omitted)");

  // --- solve ---
  auto* solve = app.add_subcommand("solve", "solve one instance, print a JSON report");
  std::string s_instance, s_solver = "psimplex", s_trace, s_ipm_log, s_dump_lp;
  bool s_as_vector = false, s_full = false;
  double s_time_limit = 0.0;
  std::optional<double> s_mu;
  solve->add_option("--instance", s_instance)->required()->check(CLI::ExistingFile);
  solve->add_option("--solver", s_solver)->check(CLI::IsMember({"psimplex", "ipm"}));
  solve->add_flag("--as-vector", s_as_vector,
                  "flatten a kcs instance to its dense vector formulation");
  solve->add_option("--mu", s_mu, "ipm: solve at fixed mu instead of basis pursuit");
  solve->add_option("--trace", s_trace, "simplex: per-pivot CSV path");
  solve->add_option("--ipm-log", s_ipm_log, "ipm: per-iteration CSV path");
  solve->add_option("--dump-lp", s_dump_lp, "export the built LP (triplet text format)");
  solve->add_option("--time-limit", s_time_limit, "seconds, 0 disables");
  solve->add_flag("--full-solution", s_full, "embed the dense solution vector");

  // --- bench ---
  auto* bench = app.add_subcommand("bench", "run the sweep from a JSON config");
  std::string b_config, b_out_dir = "bench_out";
  std::optional<std::uint64_t> b_seed;
  std::optional<int> b_threads;
  bool b_quiet = false;
  bench->add_option("--config", b_config)->required()->check(CLI::ExistingFile);
  bench->add_option("--out-dir", b_out_dir);
  bench->add_option("--seed", b_seed, "override the config base seed");
  bench->add_option("--threads", b_threads, "override the config worker count");
  bench->add_flag("--quiet", b_quiet);

  // --- check ---
  auto* check = app.add_subcommand("check", "bound calculators and RIP checks");
  check->require_subcommand(1);
  auto* bounds = check->add_subcommand("bounds", "measurement-count bounds");
  double c_k = 0, c_n = 0, c_n1 = 0, c_n2 = 0, c_bigc = 30.0, c_m1 = 0, c_m2 = 0;
  bounds->add_option("--k", c_k)->required();
  bounds->add_option("--n", c_n);
  bounds->add_option("--n1", c_n1);
  bounds->add_option("--n2", c_n2);
  bounds->add_option("--bigc", c_bigc, "the constant C (> 28.1)");
  bounds->add_option("--m1", c_m1);
  bounds->add_option("--m2", c_m2);

  auto* rip = check->add_subcommand("rip", "brute-force delta_k of a generated matrix");
  int r_k = 1, r_m = 0, r_n = 0;
  std::uint64_t r_seed = 1;
  std::string r_ensemble = "gaussian";
  std::int64_t r_cap = 200000;
  rip->add_option("--k", r_k)->required();
  rip->add_option("--m", r_m)->required();
  rip->add_option("--n", r_n)->required();
  rip->add_option("--seed", r_seed);
  rip->add_option("--ensemble", r_ensemble);
  rip->add_option("--cap", r_cap);

  auto* kr = check->add_subcommand("kron-rip", "Kronecker RIP inequality on generated A, B");
  int kr_k = 1, kr_m1 = 0, kr_n1 = 0, kr_m2 = 0, kr_n2 = 0;
  std::uint64_t kr_seed = 1;
  kr->add_option("--k", kr_k)->required();
  kr->add_option("--m1", kr_m1)->required();
  kr->add_option("--n1", kr_n1)->required();
  kr->add_option("--m2", kr_m2)->required();
  kr->add_option("--n2", kr_n2)->required();
  kr->add_option("--seed", kr_seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      return run_gen(gen_type, g_m1, g_m2, g_n1, g_n2, g_k, g_seed, g_ensemble,
                     g_amplitude, g_out);
    }

    if (*solve) {
      std::ifstream f(s_instance);
      const cslp::InstanceKind kind = cslp::sniff_instance_kind(f);

      cslp::ParametricLp lp;
      Eigen::VectorXd x0;
      if (kind == cslp::InstanceKind::vector) {
        const auto stored = cslp::read_vector_instance(f);
        x0 = stored.inst.x0;
        lp = cslp::build_vector_lp(stored.inst);
      } else {
        const auto stored = cslp::read_kcs_instance(f);
        x0 = cslp::vec(stored.inst.X0);
        lp = s_as_vector ? cslp::build_vector_lp(cslp::vector_form_of(stored.inst))
                         : cslp::build_kcs_lp(stored.inst);
      }
      if (!s_dump_lp.empty()) {
        std::ostringstream os;
        cslp::write_lp(os, lp);
        cslp::save_text(s_dump_lp, os.str());
      }

      cslp::SolveReport rep;
      std::ofstream trace_file, log_file;
      if (s_solver == "psimplex") {
        cslp::SimplexOptions opts;
        opts.time_limit_sec = s_time_limit;
        if (!s_trace.empty()) {
          trace_file.open(s_trace);
          opts.trace = &trace_file;
        }
        rep = cslp::solve_parametric(lp, opts);
      } else {
        const auto mode = s_mu.has_value() ? cslp::StandardFormMode::fixed_mu
                                           : cslp::StandardFormMode::basis_pursuit;
        const cslp::StandardLp slp = cslp::to_standard_form(lp, mode, s_mu.value_or(0.0));
        cslp::IpmOptions opts;
        opts.time_limit_sec = s_time_limit;
        if (!s_ipm_log.empty()) {
          log_file.open(s_ipm_log);
          opts.log = &log_file;
        }
        rep = cslp::ipm_solve(slp, opts);
      }
      std::cout << report_to_json(rep, &x0, s_full).dump(2) << '\n';
      return rep.status == cslp::SolveStatus::numerical_failure ? 1 : 0;
    }

    if (*bench) {
      cslp::BenchConfig cfg = cslp::bench_config_from_json_text(cslp::load_text(b_config));
      if (b_seed) cfg.base_seed = *b_seed;
      if (b_threads) cfg.threads = *b_threads;
      const auto result = cslp::run_bench(
          cfg, b_quiet ? std::function<void(const cslp::BenchRecord&)>{}
                       : [](const cslp::BenchRecord& r) {
                           std::cerr << cslp::to_string(r.solver) << " k=" << r.k
                                     << " trial=" << r.trial << " " << r.seconds << "s"
                                     << " steps=" << r.steps
                                     << (r.exact ? " exact" : " miss") << '\n';
                         });
      cslp::emit_csv(result, b_out_dir);
      bool failed = false;
      for (const auto& r : result.records) {
        failed |= r.status == cslp::SolveStatus::numerical_failure;
      }
      std::cout << "wrote " << result.records.size() << " records to " << b_out_dir
                << '\n';
      return failed ? 1 : 0;
    }

    if (*bounds) {
      if (c_n > 0) {
        std::cout << "bound_vector_m(k=" << c_k << ", n=" << c_n
                  << ") = " << cslp::bound_vector_m(c_k, c_n) << '\n';
        if (c_k * c_k < c_n) {
          std::cout << "bound_kcs_m(k=" << c_k << ", n=" << c_n
                    << ") = " << cslp::bound_kcs_m(c_k, c_n) << '\n';
        }
      }
      if (c_n1 > 0 && c_n2 > 0) {
        const auto [s1, s2] = cslp::bound_kcs_sides(c_k, c_n1, c_n2, c_bigc);
        std::cout << "bound_kcs_sides(k=" << c_k << ", C=" << c_bigc << ") = (" << s1
                  << ", " << s2 << ")\n";
      }
      if (c_m1 > 0 && c_m2 > 0) {
        const auto sb = cslp::success_prob_bounds(c_m1, c_m2, c_bigc);
        std::cout << "success_prob rho_bound = " << sb.rho_bound
                  << ", simple_bound = " << sb.simple_bound << ", rate = " << sb.rate
                  << '\n';
      }
      return 0;
    }

    if (*rip) {
      const auto M = cslp::gen_sensing_matrix({parse_ensemble(r_ensemble), r_m, r_n, r_seed});
      const auto est = cslp::rip_bruteforce(M, r_k, r_cap);
      std::cout << "delta_" << est.k << " = " << est.delta << "  (extremal subset:";
      for (int j : est.extremal) std::cout << ' ' << j;
      std::cout << ")\n";
      return 0;
    }

    if (*kr) {
      cslp::SplitMix64 rng(kr_seed);
      const auto A = cslp::gen_sensing_matrix(
          {cslp::EnsembleKind::gaussian, kr_m1, kr_n1, rng.next_u64()});
      const auto B = cslp::gen_sensing_matrix(
          {cslp::EnsembleKind::gaussian, kr_m2, kr_n2, rng.next_u64()});
      const double da = cslp::rip_bruteforce(A, kr_k).delta;
      const double db = cslp::rip_bruteforce(B, kr_k).delta;
      const double du = cslp::rip_bruteforce(cslp::kron(B, A), kr_k).delta;
      const bool holds = cslp::kron_rip_check(A, B, kr_k);
      std::cout << "delta_k(A) = " << da << ", delta_k(B) = " << db
                << ", delta_k(B x A) = " << du << '\n';
      std::cout << "1 + delta_k(U) <= (1 + delta_k(A))(1 + delta_k(B)): "
                << (holds ? "holds" : "VIOLATED") << '\n';
      return holds ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
