#pragma once

#include <string>
#include <vector>

#include "cslp/lp_model.hpp"

namespace cslp {

// time_limit is not a failure of the method, only of the budget; the bench
// harness records such solves as censored.
enum class SolveStatus { optimal, max_pivots, numerical_failure, time_limit };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::max_pivots: return "max_pivots";
    case SolveStatus::numerical_failure: return "numerical_failure";
    case SolveStatus::time_limit: return "time_limit";
  }
  return "unknown";
}

struct SolveReport {
  SolveStatus status = SolveStatus::numerical_failure;
  ExtractedSolution solution;
  double final_mu = 0.0;  // homotopy parameter at exit; complementarity for the IPM
  long steps = 0;         // simplex pivots or IPM iterations
  int refactorizations = 0;
  double wall_seconds = 0.0;
  double eps_abs_max = 0.0;  // max |eps| at exit; primal residual when eps was eliminated

  // Interior-point extras.
  long factor_nnz = 0;  // normal-equations factor nonzeros, last iteration
  bool split_pairs_exclusive = true;
  double rel_gap = 0.0;
  std::vector<double> mu_trace;  // complementarity (IPM) or breakpoint (simplex) per step
};

}  // namespace cslp
