#include "cslp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "cslp/analysis.hpp"
#include "cslp/interior_point.hpp"
#include "cslp/io.hpp"
#include "cslp/lp_model.hpp"
#include "cslp/parametric_simplex.hpp"
#include "cslp/rng.hpp"

namespace cslp {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

const SolverId kAllSolvers[] = {SolverId::psimplex_vector, SolverId::psimplex_kcs,
                                SolverId::ipm_vector, SolverId::ipm_kcs};

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

const char* to_string(SolverId id) {
  switch (id) {
    case SolverId::psimplex_vector: return "psimplex_vector";
    case SolverId::psimplex_kcs: return "psimplex_kcs";
    case SolverId::ipm_vector: return "ipm_vector";
    case SolverId::ipm_kcs: return "ipm_kcs";
  }
  return "unknown";
}

SolverId solver_id_from_string(const std::string& name) {
  for (SolverId id : kAllSolvers) {
    if (name == to_string(id)) return id;
  }
  throw std::invalid_argument("unknown solver id: " + name);
}

BenchInstances make_bench_instances(const BenchConfig& cfg, int k, int trial) {
  // Per-trial root seed is base + trial; the sub-seeds for A, B, and the
  // signal are drawn from it, with k folded into the signal seed so supports
  // differ across sparsity levels.
  const std::uint64_t root = cfg.base_seed + static_cast<std::uint64_t>(trial);
  SplitMix64 rng(root);
  const std::uint64_t seed_a = rng.next_u64();
  const std::uint64_t seed_b = rng.next_u64();
  const std::uint64_t seed_x = rng.next_u64() ^ static_cast<std::uint64_t>(k);

  const auto t0 = clock_type::now();
  BenchInstances out;
  out.kcs = make_kcs_instance({cfg.ensemble, cfg.m1, cfg.n1, seed_a},
                              {cfg.ensemble, cfg.m2, cfg.n2, seed_b},
                              {cfg.n1 * cfg.n2, k, cfg.amplitude, seed_x});
  out.vector = vector_form_of(out.kcs);
  out.gen_seconds = seconds_since(t0);
  return out;
}

namespace {

BenchRecord run_cell(const BenchConfig& cfg, const BenchInstances& inst, SolverId solver,
                     int k, int trial) {
  BenchRecord rec;
  rec.solver = solver;
  rec.k = k;
  rec.trial = trial;
  rec.gen_seconds = inst.gen_seconds;

  const bool kcs_form = solver == SolverId::psimplex_kcs || solver == SolverId::ipm_kcs;
  const bool simplex = solver == SolverId::psimplex_vector || solver == SolverId::psimplex_kcs;

  const auto tb = clock_type::now();
  ParametricLp lp = kcs_form ? build_kcs_lp(inst.kcs) : build_vector_lp(inst.vector);

  SolveReport report;
  if (simplex) {
    rec.build_seconds = seconds_since(tb);
    SimplexOptions opts;
    opts.time_limit_sec = cfg.time_limit_sec;
    report = solve_parametric(lp, opts);
  } else {
    StandardLp slp = to_standard_form(lp, StandardFormMode::basis_pursuit);
    rec.build_seconds = seconds_since(tb);
    IpmOptions opts;
    opts.time_limit_sec = cfg.time_limit_sec;
    report = ipm_solve(slp, opts);
  }

  rec.seconds = report.wall_seconds;
  rec.steps = report.steps;
  rec.status = report.status;
  const Eigen::VectorXd& x0 = inst.vector.x0;
  const RecoveryReport rr = check_recovery(report.solution.x, x0);
  rec.exact = report.status == SolveStatus::optimal && rr.exact;
  rec.rel_err = rr.rel_l2_error;
  return rec;
}

}  // namespace

BenchResult run_bench(const BenchConfig& cfg,
                      const std::function<void(const BenchRecord&)>& on_record) {
  if (cfg.trials < 1) throw std::invalid_argument("run_bench: trials must be >= 1");
  for (int k : cfg.k_grid) {
    if (k > cfg.n1 * cfg.n2) throw std::invalid_argument("run_bench: k exceeds n");
  }
  const std::vector<SolverId> solvers =
      cfg.solvers.empty() ? std::vector<SolverId>(std::begin(kAllSolvers), std::end(kAllSolvers))
                          : cfg.solvers;

  struct Cell {
    int k, trial;
  };
  std::vector<Cell> cells;
  for (int k : cfg.k_grid) {
    for (int t = 0; t < cfg.trials; ++t) cells.push_back({k, t});
  }

  std::vector<std::vector<BenchRecord>> per_cell(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex emit_mutex;

  const int threads = std::max(1, cfg.threads);
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= cells.size()) return;
      const auto [k, trial] = cells[c];
      const BenchInstances inst = make_bench_instances(cfg, k, trial);
      for (SolverId solver : solvers) {
        BenchRecord rec = run_cell(cfg, inst, solver, k, trial);
        if (on_record) {
          std::lock_guard<std::mutex> lock(emit_mutex);
          on_record(rec);
        }
        per_cell[c].push_back(rec);
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  BenchResult result;
  for (auto& recs : per_cell) {
    result.records.insert(result.records.end(), recs.begin(), recs.end());
  }
  std::sort(result.records.begin(), result.records.end(),
            [](const BenchRecord& a, const BenchRecord& b) {
              return std::tie(a.solver, a.k, a.trial) < std::tie(b.solver, b.k, b.trial);
            });
  result.aggregates = aggregate_records(result.records);
  return result;
}

std::vector<BenchAggregate> aggregate_records(const std::vector<BenchRecord>& records) {
  std::vector<BenchAggregate> out;
  std::size_t i = 0;
  while (i < records.size()) {
    std::size_t j = i;
    double sum = 0.0;
    int exact = 0;
    while (j < records.size() && records[j].solver == records[i].solver &&
           records[j].k == records[i].k) {
      sum += records[j].seconds;
      exact += records[j].exact ? 1 : 0;
      ++j;
    }
    const double count = static_cast<double>(j - i);
    BenchAggregate agg;
    agg.solver = records[i].solver;
    agg.k = records[i].k;
    agg.mean_seconds = sum / count;
    double ss = 0.0;
    for (std::size_t t = i; t < j; ++t) {
      const double d = records[t].seconds - agg.mean_seconds;
      ss += d * d;
    }
    agg.std_seconds = count > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
    agg.recovery_rate = exact / count;
    out.push_back(agg);
    i = j;
  }
  return out;
}

std::string records_csv(const std::vector<BenchRecord>& records) {
  std::string out = "solver,k,trial,seconds,steps,exact,rel_err\n";
  for (const BenchRecord& r : records) {
    out += to_string(r.solver);
    out += ',' + std::to_string(r.k) + ',' + std::to_string(r.trial) + ',' +
           fmt6(r.seconds) + ',' + std::to_string(r.steps) + ',' +
           (r.exact ? "1" : "0") + ',' + fmt6(r.rel_err) + '\n';
  }
  return out;
}

std::string aggregate_csv(const std::vector<BenchAggregate>& aggregates) {
  std::string out = "solver,k,mean_seconds,std_seconds,recovery_rate\n";
  for (const BenchAggregate& a : aggregates) {
    out += to_string(a.solver);
    out += ',' + std::to_string(a.k) + ',' + fmt6(a.mean_seconds) + ',' +
           fmt6(a.std_seconds) + ',' + fmt6(a.recovery_rate) + '\n';
  }
  return out;
}

std::string build_times_csv(const std::vector<BenchRecord>& records) {
  std::string out = "solver,k,trial,gen_seconds,build_seconds\n";
  for (const BenchRecord& r : records) {
    out += to_string(r.solver);
    out += ',' + std::to_string(r.k) + ',' + std::to_string(r.trial) + ',' +
           fmt6(r.gen_seconds) + ',' + fmt6(r.build_seconds) + '\n';
  }
  return out;
}

void emit_csv(const BenchResult& result, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto path = [&](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };
  save_text(path("records.csv"), records_csv(result.records));
  save_text(path("aggregate.csv"), aggregate_csv(result.aggregates));
  save_text(path("build_times.csv"), build_times_csv(result.records));
}

BenchConfig bench_config_from_json_text(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  BenchConfig cfg;
  cfg.m1 = j.at("m1").get<int>();
  cfg.m2 = j.at("m2").get<int>();
  cfg.n1 = j.at("n1").get<int>();
  cfg.n2 = j.at("n2").get<int>();
  cfg.k_grid = j.at("k_grid").get<std::vector<int>>();
  cfg.trials = j.value("trials", 10);
  cfg.base_seed = j.value("base_seed", std::uint64_t{1});
  cfg.time_limit_sec = j.value("time_limit_sec", 30.0);
  cfg.threads = j.value("threads", 1);
  if (j.contains("solvers")) {
    for (const auto& s : j.at("solvers")) {
      cfg.solvers.push_back(solver_id_from_string(s.get<std::string>()));
    }
  }
  if (j.contains("ensemble")) {
    const std::string e = j.at("ensemble").get<std::string>();
    if (e == "gaussian") cfg.ensemble = EnsembleKind::gaussian;
    else if (e == "rademacher") cfg.ensemble = EnsembleKind::rademacher;
    else throw std::invalid_argument("unknown ensemble: " + e);
  }
  if (j.contains("amplitude")) {
    const std::string a = j.at("amplitude").get<std::string>();
    if (a == "standard_gaussian") cfg.amplitude = AmplitudeModel::standard_gaussian;
    else if (a == "unit_signs") cfg.amplitude = AmplitudeModel::unit_signs;
    else throw std::invalid_argument("unknown amplitude model: " + a);
  }
  return cfg;
}

}  // namespace cslp
