#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cslp/instance.hpp"
#include "cslp/solve_report.hpp"

namespace cslp {

enum class SolverId { psimplex_vector, psimplex_kcs, ipm_vector, ipm_kcs };

const char* to_string(SolverId id);
SolverId solver_id_from_string(const std::string& name);

struct BenchConfig {
  int m1 = 0, m2 = 0, n1 = 0, n2 = 0;  // vector dims are m1*m2 and n1*n2
  std::vector<int> k_grid;
  int trials = 10;
  std::vector<SolverId> solvers;  // empty means all four
  std::uint64_t base_seed = 1;
  double time_limit_sec = 30.0;
  EnsembleKind ensemble = EnsembleKind::gaussian;
  AmplitudeModel amplitude = AmplitudeModel::standard_gaussian;
  int threads = 1;
};

struct BenchRecord {
  SolverId solver = SolverId::psimplex_vector;
  int k = 0;
  int trial = 0;
  double seconds = 0.0;  // the solve call only
  long steps = 0;        // pivots or IPM iterations
  bool exact = false;
  double rel_err = 0.0;
  SolveStatus status = SolveStatus::optimal;
  // Auxiliary timings, reported in a separate file so the record layout
  // stays fixed.
  double gen_seconds = 0.0;
  double build_seconds = 0.0;
};

struct BenchAggregate {
  SolverId solver = SolverId::psimplex_vector;
  int k = 0;
  double mean_seconds = 0.0;
  double std_seconds = 0.0;  // sample standard deviation, 0 for a single trial
  double recovery_rate = 0.0;
};

struct BenchResult {
  std::vector<BenchRecord> records;       // sorted by (solver, k, trial)
  std::vector<BenchAggregate> aggregates;  // sorted by (solver, k)
};

// One (k, trial) cell: both formulations share the signal and the A, B
// draws, so vec(kcs.Y) equals the vector observations bit for bit.
struct BenchInstances {
  KcsInstance kcs;
  VectorInstance vector;
  double gen_seconds = 0.0;
};
BenchInstances make_bench_instances(const BenchConfig& cfg, int k, int trial);

// Runs every (k, trial, solver) cell; trials may run on worker threads, and
// the result is independent of scheduling. on_record, when given, is called
// serially as cells finish.
BenchResult run_bench(const BenchConfig& cfg,
                      const std::function<void(const BenchRecord&)>& on_record = {});

std::vector<BenchAggregate> aggregate_records(const std::vector<BenchRecord>& records);

// records.csv:     solver,k,trial,seconds,steps,exact,rel_err
// aggregate.csv:   solver,k,mean_seconds,std_seconds,recovery_rate
// build_times.csv: solver,k,trial,gen_seconds,build_seconds
std::string records_csv(const std::vector<BenchRecord>& records);
std::string aggregate_csv(const std::vector<BenchAggregate>& aggregates);
std::string build_times_csv(const std::vector<BenchRecord>& records);
void emit_csv(const BenchResult& result, const std::string& out_dir);

BenchConfig bench_config_from_json_text(const std::string& text);

}  // namespace cslp
