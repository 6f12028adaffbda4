#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cslp/instance.hpp"
#include "cslp/interior_point.hpp"
#include "cslp/lp_model.hpp"
#include "cslp/parametric_simplex.hpp"
#include "cslp/rng.hpp"

using namespace cslp;

namespace {

VectorInstance instance_1x2() {
  VectorInstance inst;
  inst.A.resize(1, 2);
  inst.A << 1, 2;
  inst.y.resize(1);
  inst.y << 2;
  inst.x0.resize(2);
  inst.x0 << 0, 1;
  return inst;
}

VectorInstance random_vector_instance(int m, int n, int k, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return make_vector_instance({EnsembleKind::gaussian, m, n, rng.next_u64()},
                              {n, k, AmplitudeModel::standard_gaussian, rng.next_u64()});
}

KcsInstance random_kcs(int m1, int n1, int m2, int n2, int k, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return make_kcs_instance({EnsembleKind::gaussian, m1, n1, rng.next_u64()},
                           {EnsembleKind::gaussian, m2, n2, rng.next_u64()},
                           {n1 * n2, k, AmplitudeModel::standard_gaussian, rng.next_u64()});
}

}  // namespace

TEST_CASE("standard form: vector basis pursuit drops eps and keeps unit costs") {
  const ParametricLp lp = build_vector_lp(instance_1x2());
  const StandardLp slp = to_standard_form(lp, StandardFormMode::basis_pursuit);
  CHECK(slp.A.cols() == 4);  // 2n
  CHECK(slp.c.minCoeff() == 1.0);
  CHECK(slp.c.maxCoeff() == 1.0);
  Eigen::MatrixXd want(1, 4);
  want << 1, 2, -1, -2;
  CHECK((slp.A.dense() - want).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("standard form: kcs basis pursuit splits z with zero cost") {
  const KcsInstance inst = random_kcs(3, 5, 4, 6, 2, 11);
  const ParametricLp lp = build_kcs_lp(inst);
  const StandardLp slp = to_standard_form(lp, StandardFormMode::basis_pursuit);
  const int n = lp.shape.signal_len();
  const int nz = lp.shape.num_z();
  CHECK(slp.A.cols() == 2 * n + 2 * nz);
  CHECK(slp.c.head(2 * nz).cwiseAbs().maxCoeff() == 0.0);
  CHECK(slp.c.tail(2 * n).minCoeff() == 1.0);

  // Folding the split copies must reproduce a free z exactly.
  Eigen::VectorXd v = Eigen::VectorXd::Zero(slp.A.cols());
  v[0] = 1.25;       // z+_0
  v[nz] = 2.0;       // z-_0
  const Eigen::VectorXd folded = slp.fold(v);
  CHECK(folded[lp.shape.z_begin()] == doctest::Approx(-0.75));
}

TEST_CASE("standard form: fixed mu keeps eps with unit costs") {
  const ParametricLp lp = build_vector_lp(instance_1x2());
  const StandardLp slp = to_standard_form(lp, StandardFormMode::fixed_mu, 1.0);
  CHECK(slp.A.cols() == 6);
  CHECK(slp.c.minCoeff() == 1.0);
  CHECK(slp.c.maxCoeff() == 1.0);

  const StandardLp slp3 = to_standard_form(lp, StandardFormMode::fixed_mu, 3.0);
  CHECK(slp3.c.head(4).maxCoeff() == 3.0);   // x block carries mu
  CHECK(slp3.c.tail(2).maxCoeff() == 1.0);   // eps block stays at one
}

TEST_CASE("exactly duplicated rows are removed") {
  VectorInstance inst;
  inst.A.resize(3, 2);
  inst.A << 1, 2, 1, 2, 3, 4;  // row 2 duplicates row 1
  inst.y.resize(3);
  inst.y << 2, 2, 5;
  inst.x0.resize(2);
  inst.x0 << 0, 1;
  const ParametricLp lp = build_vector_lp(inst);
  const StandardLp slp = to_standard_form(lp, StandardFormMode::basis_pursuit);
  CHECK(slp.A.rows() == 2);
  CHECK(slp.b.size() == 2);
  CHECK(slp.b[0] == 2.0);
  CHECK(slp.b[1] == 5.0);
}

TEST_CASE("ipm solves the tiny hand-checked instances") {
  {
    const ParametricLp lp = build_vector_lp(instance_1x2());
    const SolveReport rep =
        ipm_solve(to_standard_form(lp, StandardFormMode::basis_pursuit));
    REQUIRE(rep.status == SolveStatus::optimal);
    CHECK(rep.solution.x[0] == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(rep.solution.x[1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.solution.l1_x == doctest::Approx(1.0).epsilon(1e-6));
  }
  {
    VectorInstance inst;
    inst.A = Eigen::MatrixXd::Identity(2, 2);
    inst.y.resize(2);
    inst.y << 5, 0;
    inst.x0 = inst.y;
    const SolveReport rep = ipm_solve(
        to_standard_form(build_vector_lp(inst), StandardFormMode::basis_pursuit));
    REQUIRE(rep.status == SolveStatus::optimal);
    CHECK(rep.solution.x[0] == doctest::Approx(5.0).epsilon(1e-7));
    CHECK(std::abs(rep.solution.x[1]) <= 1e-6);
    CHECK(rep.solution.l1_x == doctest::Approx(5.0).epsilon(1e-7));
  }
  {
    VectorInstance inst;
    inst.A.resize(2, 3);
    inst.A << 1, 2, 3, 4, 5, 6;
    inst.y = Eigen::VectorXd::Zero(2);
    inst.x0 = Eigen::VectorXd::Zero(3);
    const SolveReport rep = ipm_solve(
        to_standard_form(build_vector_lp(inst), StandardFormMode::basis_pursuit));
    REQUIRE(rep.status == SolveStatus::optimal);
    CHECK(rep.solution.x.cwiseAbs().maxCoeff() <= 1e-7);
  }
}

TEST_CASE("terminal residuals meet the tolerances") {
  const VectorInstance inst = random_vector_instance(20, 60, 4, 21);
  const ParametricLp lp = build_vector_lp(inst);
  const StandardLp slp = to_standard_form(lp, StandardFormMode::basis_pursuit);
  const SolveReport rep = ipm_solve(slp);
  REQUIRE(rep.status == SolveStatus::optimal);
  CHECK(rep.eps_abs_max <= 1e-8 * (1.0 + slp.b.norm()));
  CHECK(rep.rel_gap <= 1e-8);
}

TEST_CASE("complementarity decreases by at least one percent per iteration") {
  const VectorInstance inst = random_vector_instance(25, 80, 5, 31);
  const SolveReport rep = ipm_solve(
      to_standard_form(build_vector_lp(inst), StandardFormMode::basis_pursuit));
  REQUIRE(rep.status == SolveStatus::optimal);
  REQUIRE(rep.mu_trace.size() >= 2);
  for (std::size_t t = 1; t < rep.mu_trace.size(); ++t) {
    CHECK(rep.mu_trace[t] <= 0.99 * rep.mu_trace[t - 1]);
  }
}

TEST_CASE("fixed mu: large mu leaves the measurements unexplained") {
  const VectorInstance inst = random_vector_instance(10, 30, 3, 41);
  const ParametricLp lp = build_vector_lp(inst);
  const SolveReport rep =
      ipm_solve(to_standard_form(lp, StandardFormMode::fixed_mu, 1e3));
  REQUIRE(rep.status == SolveStatus::optimal);
  // Optimal choice at huge mu is x = 0, eps = y.
  CHECK(rep.solution.l1_x <= 1e-6);
  CHECK(rep.solution.l1_eps == doctest::Approx(inst.y.cwiseAbs().sum()).epsilon(1e-6));
}

TEST_CASE("objectives agree with the parametric simplex across formulations") {
  for (std::uint64_t seed = 60; seed < 64; ++seed) {
    const KcsInstance kcs = random_kcs(5, 9, 6, 8, 3, seed);
    const ParametricLp klp = build_kcs_lp(kcs);
    const ParametricLp vlp = build_vector_lp(vector_form_of(kcs));

    const SolveReport simplex = solve_parametric(vlp);
    const SolveReport ipm_k =
        ipm_solve(to_standard_form(klp, StandardFormMode::basis_pursuit));
    const SolveReport ipm_v =
        ipm_solve(to_standard_form(vlp, StandardFormMode::basis_pursuit));
    REQUIRE(simplex.status == SolveStatus::optimal);
    REQUIRE(ipm_k.status == SolveStatus::optimal);
    REQUIRE(ipm_v.status == SolveStatus::optimal);
    CHECK(ipm_v.solution.l1_x ==
          doctest::Approx(simplex.solution.l1_x).epsilon(1e-6));
    CHECK(ipm_k.solution.l1_x ==
          doctest::Approx(simplex.solution.l1_x).epsilon(1e-6));
  }
}

TEST_CASE("sparse normal equations path matches the dense path") {
  const KcsInstance kcs = random_kcs(6, 12, 6, 12, 3, 71);
  const ParametricLp lp = build_kcs_lp(kcs);
  const StandardLp slp = to_standard_form(lp, StandardFormMode::basis_pursuit);
  const int r = slp.A.rows();
  REQUIRE(r == 12 * 6 + 36);

  IpmOptions dense_opts;
  dense_opts.dense_threshold = 1 << 20;
  IpmOptions sparse_opts;
  sparse_opts.dense_threshold = 0;

  const SolveReport dense = ipm_solve(slp, dense_opts);
  const SolveReport sparse = ipm_solve(slp, sparse_opts);
  REQUIRE(dense.status == SolveStatus::optimal);
  REQUIRE(sparse.status == SolveStatus::optimal);
  CHECK((dense.solution.x - sparse.solution.x).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK(sparse.factor_nnz > 0);
  CHECK(sparse.factor_nnz < static_cast<long>(r) * r);
  CHECK(sparse.factor_nnz < dense.factor_nnz * 2);  // dense records r(r+1)/2
}

TEST_CASE("iteration log has the expected shape") {
  const VectorInstance inst = random_vector_instance(8, 24, 2, 81);
  std::ostringstream log;
  IpmOptions opts;
  opts.log = &log;
  const SolveReport rep = ipm_solve(
      to_standard_form(build_vector_lp(inst), StandardFormMode::basis_pursuit), opts);
  REQUIRE(rep.status == SolveStatus::optimal);
  const std::string text = log.str();
  CHECK(text.rfind("iter,primal_res,dual_res,gap\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == rep.steps + 2);
}

TEST_CASE("rank-deficient constraints surface as numerical failure") {
  VectorInstance inst;
  inst.A.resize(2, 2);
  inst.A << 1, 2, 2, 4;  // dependent but not duplicated rows
  inst.y.resize(2);
  inst.y << 1, 2;
  inst.x0.resize(2);
  inst.x0 << 1, 0;
  const SolveReport rep = ipm_solve(
      to_standard_form(build_vector_lp(inst), StandardFormMode::basis_pursuit));
  CHECK(rep.status == SolveStatus::numerical_failure);
}
