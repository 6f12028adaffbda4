#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "cslp/bench.hpp"
#include "cslp/matrix_ops.hpp"

using namespace cslp;

namespace {

BenchConfig small_config() {
  BenchConfig cfg;
  cfg.m1 = 4;
  cfg.m2 = 5;
  cfg.n1 = 8;
  cfg.n2 = 9;
  cfg.k_grid = {2};
  cfg.trials = 3;
  cfg.base_seed = 7;
  cfg.time_limit_sec = 30.0;
  return cfg;
}

// Everything except the timing fields.
std::string stable_view(const std::vector<BenchRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += std::string(to_string(r.solver)) + '|' + std::to_string(r.k) + '|' +
           std::to_string(r.trial) + '|' + std::to_string(r.steps) + '|' +
           (r.exact ? '1' : '0') + '|' + std::to_string(r.rel_err) + '|' +
           to_string(r.status) + '\n';
  }
  return out;
}

}  // namespace

TEST_CASE("record counting: one record per (solver, k, trial)") {
  BenchConfig cfg = small_config();
  cfg.solvers = {SolverId::psimplex_vector};
  const BenchResult res = run_bench(cfg);
  CHECK(res.records.size() == 3);
  for (int t = 0; t < 3; ++t) {
    CHECK(res.records[t].trial == t);
    CHECK(res.records[t].k == 2);
  }
  REQUIRE(res.aggregates.size() == 1);
  CHECK(res.aggregates[0].k == 2);
}

TEST_CASE("both formulations in a cell share signal and measurements") {
  const BenchConfig cfg = small_config();
  const BenchInstances inst = make_bench_instances(cfg, 2, 1);
  CHECK((inst.vector.y - vec(inst.kcs.Y)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((inst.vector.x0 - vec(inst.kcs.X0)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((inst.vector.A - kron(inst.kcs.B, inst.kcs.A)).cwiseAbs().maxCoeff() == 0.0);

  // Same trial, different k: same sensing matrices, different signal.
  const BenchInstances other = make_bench_instances(cfg, 3, 1);
  CHECK((other.kcs.A - inst.kcs.A).cwiseAbs().maxCoeff() == 0.0);
  CHECK((other.kcs.B - inst.kcs.B).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("reruns with one seed are identical; different seeds are not") {
  BenchConfig cfg = small_config();
  cfg.solvers = {SolverId::psimplex_vector, SolverId::psimplex_kcs};
  const BenchResult a = run_bench(cfg);
  const BenchResult b = run_bench(cfg);
  CHECK(stable_view(a.records) == stable_view(b.records));
  CHECK(records_csv(a.records) != "");

  BenchConfig other = cfg;
  other.base_seed = 8;
  const BenchResult c = run_bench(other);
  CHECK(stable_view(a.records) != stable_view(c.records));
}

TEST_CASE("worker threads do not change the records") {
  BenchConfig cfg = small_config();
  cfg.k_grid = {1, 2};
  cfg.solvers = {SolverId::psimplex_vector, SolverId::ipm_kcs};
  const BenchResult serial = run_bench(cfg);
  cfg.threads = 4;
  const BenchResult parallel = run_bench(cfg);
  CHECK(stable_view(serial.records) == stable_view(parallel.records));
}

TEST_CASE("csv emission: headers, empty sets, and the known-triple aggregate") {
  CHECK(records_csv({}) == "solver,k,trial,seconds,steps,exact,rel_err\n");
  CHECK(aggregate_csv({}) == "solver,k,mean_seconds,std_seconds,recovery_rate\n");
  CHECK(build_times_csv({}) == "solver,k,trial,gen_seconds,build_seconds\n");

  std::vector<BenchRecord> recs(3);
  for (int t = 0; t < 3; ++t) {
    recs[t].solver = SolverId::ipm_vector;
    recs[t].k = 4;
    recs[t].trial = t;
    recs[t].seconds = 1.0 + t;  // 1, 2, 3
    recs[t].steps = 10 + t;
    recs[t].exact = t > 0;
    recs[t].rel_err = 0.5;
  }
  const auto aggs = aggregate_records(recs);
  REQUIRE(aggs.size() == 1);
  CHECK(aggs[0].mean_seconds == doctest::Approx(2.0));
  CHECK(aggs[0].std_seconds == doctest::Approx(1.0));  // sample std over 3 trials
  CHECK(aggs[0].recovery_rate == doctest::Approx(2.0 / 3.0));

  const std::string csv = records_csv(recs);
  CHECK(csv.find("ipm_vector,4,0,1,10,0,0.5\n") != std::string::npos);
  CHECK(csv.find("ipm_vector,4,2,3,12,1,0.5\n") != std::string::npos);
}

TEST_CASE("aggregates recomputed from records match the emitted table") {
  BenchConfig cfg = small_config();
  cfg.solvers = {SolverId::psimplex_vector, SolverId::ipm_vector};
  const BenchResult res = run_bench(cfg);
  const auto again = aggregate_records(res.records);
  CHECK(aggregate_csv(again) == aggregate_csv(res.aggregates));
}

TEST_CASE("timeouts are censored records, not crashes") {
  BenchConfig cfg = small_config();
  cfg.solvers = {SolverId::ipm_vector};
  cfg.trials = 1;
  cfg.time_limit_sec = 1e-9;
  const BenchResult res = run_bench(cfg);
  REQUIRE(res.records.size() == 1);
  CHECK(res.records[0].status == SolveStatus::time_limit);
  CHECK_FALSE(res.records[0].exact);
}

TEST_CASE("config json round trip") {
  const std::string text = R"({
    "m1": 4, "m2": 5, "n1": 8, "n2": 9,
    "k_grid": [1, 2, 3],
    "trials": 2,
    "base_seed": 99,
    "time_limit_sec": 12.5,
    "threads": 2,
    "solvers": ["psimplex_kcs", "ipm_kcs"],
    "ensemble": "rademacher",
    "amplitude": "unit_signs"
  })";
  const BenchConfig cfg = bench_config_from_json_text(text);
  CHECK(cfg.m1 == 4);
  CHECK(cfg.n2 == 9);
  CHECK(cfg.k_grid == std::vector<int>{1, 2, 3});
  CHECK(cfg.trials == 2);
  CHECK(cfg.base_seed == 99);
  CHECK(cfg.time_limit_sec == 12.5);
  CHECK(cfg.threads == 2);
  REQUIRE(cfg.solvers.size() == 2);
  CHECK(cfg.solvers[0] == SolverId::psimplex_kcs);
  CHECK(cfg.ensemble == EnsembleKind::rademacher);
  CHECK(cfg.amplitude == AmplitudeModel::unit_signs);

  CHECK_THROWS(bench_config_from_json_text(R"({"m1": 1})"));
  CHECK_THROWS(solver_id_from_string("nope"));
}

TEST_CASE("invalid configs are rejected") {
  BenchConfig cfg = small_config();
  cfg.trials = 0;
  CHECK_THROWS(run_bench(cfg));
  cfg = small_config();
  cfg.k_grid = {1000};  // beyond n = 72
  CHECK_THROWS(run_bench(cfg));
}
