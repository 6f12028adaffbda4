#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "cslp/basis_factor.hpp"
#include "cslp/instance.hpp"
#include "cslp/lp_model.hpp"
#include "cslp/rng.hpp"

using namespace cslp;

namespace {

// B * v where v is indexed by basis position.
Eigen::VectorXd basis_apply(const SparseMatrix& A, const std::vector<int>& basis,
                            const Eigen::VectorXd& v) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(A.rows());
  for (std::size_t p = 0; p < basis.size(); ++p) {
    auto rows = A.col_rows(basis[p]);
    auto vals = A.col_values(basis[p]);
    for (std::size_t t = 0; t < rows.size(); ++t) y[rows[t]] += vals[t] * v[p];
  }
  return y;
}

Eigen::VectorXd basis_apply_transpose(const SparseMatrix& A, const std::vector<int>& basis,
                                      const Eigen::VectorXd& w) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t p = 0; p < basis.size(); ++p) {
    auto rows = A.col_rows(basis[p]);
    auto vals = A.col_values(basis[p]);
    double s = 0.0;
    for (std::size_t t = 0; t < rows.size(); ++t) s += vals[t] * w[rows[t]];
    y[static_cast<Eigen::Index>(p)] = s;
  }
  return y;
}

void check_identity_reproduction(const SparseMatrix& A, const std::vector<int>& basis,
                                 const FactorizedBasis& F) {
  const int r = A.rows();
  for (int i = 0; i < r; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(r, i);
    Eigen::VectorXd v = e;
    F.solve(v);
    CHECK((basis_apply(A, basis, v) - e).cwiseAbs().maxCoeff() <= 1e-8);

    Eigen::VectorXd c = Eigen::VectorXd::Unit(r, i);
    Eigen::VectorXd w = c;
    F.solve_transpose(w);
    CHECK((basis_apply_transpose(A, basis, w) - c).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

}  // namespace

TEST_CASE("identity-like and triangular bases factor without a bump") {
  // Permuted lower-triangular matrix: the peel must absorb everything.
  SparseMatrix A(4, 4);
  A.add(0, 0, 2.0);
  A.add(2, 0, 0.5);
  A.add(3, 0, -1.0);
  A.add(2, 1, 3.0);
  A.add(3, 1, 0.25);
  A.add(3, 2, -2.0);
  A.add(1, 3, 5.0);
  A.add(0, 3, 1.0);
  A.add(2, 3, 1.0);
  A.add(3, 3, 1.0);
  A.compress();

  std::vector<int> basis{0, 1, 2, 3};
  FactorizedBasis F;
  REQUIRE(F.factorize(A, basis));
  CHECK(F.bump_dim() == 0);
  check_identity_reproduction(A, basis, F);
}

TEST_CASE("dense random bases go through the bump and still solve") {
  SplitMix64 rng(2718);
  const int r = 12;
  SparseMatrix A(r, 2 * r);
  for (int j = 0; j < 2 * r; ++j) {
    for (int i = 0; i < r; ++i) {
      if (rng.next_unit() < 0.6) A.add(i, j, rng.next_gaussian());
    }
  }
  A.compress();
  std::vector<int> basis(r);
  std::iota(basis.begin(), basis.end(), r / 2);
  FactorizedBasis F;
  REQUIRE(F.factorize(A, basis));
  check_identity_reproduction(A, basis, F);
}

TEST_CASE("the kcs starting basis factors as a permuted triangle") {
  const auto inst = make_kcs_instance({EnsembleKind::gaussian, 3, 6, 1},
                                      {EnsembleKind::gaussian, 4, 5, 2},
                                      {30, 3, AmplitudeModel::standard_gaussian, 3});
  const ParametricLp lp = build_kcs_lp(inst);
  const LpShape& sh = lp.shape;

  std::vector<int> basis;
  for (int j = 0; j < sh.num_z(); ++j) basis.push_back(sh.z_begin() + j);
  for (int i = 0; i < sh.num_eps(); ++i) {
    basis.push_back(lp.rhs[sh.num_z() + i] >= 0 ? sh.ep_begin() + i : sh.em_begin() + i);
  }
  FactorizedBasis F;
  REQUIRE(F.factorize(lp.constraints, basis));
  CHECK(F.bump_dim() == 0);
  check_identity_reproduction(lp.constraints, basis, F);
}

TEST_CASE("eta updates track column replacements") {
  SplitMix64 rng(31415);
  const int r = 10;
  SparseMatrix A(r, 3 * r);
  for (int j = 0; j < 3 * r; ++j) {
    for (int i = 0; i < r; ++i) {
      if (rng.next_unit() < 0.5) A.add(i, j, rng.next_gaussian());
    }
  }
  A.compress();

  std::vector<int> basis(r);
  std::iota(basis.begin(), basis.end(), 0);
  FactorizedBasis F;
  REQUIRE(F.factorize(A, basis));

  // Replace a handful of columns through etas, comparing against a fresh
  // factorization of the updated basis each time.
  int replaced = 0;
  for (int q = r; q < 3 * r && replaced < 6; ++q) {
    Eigen::VectorXd col = Eigen::VectorXd::Zero(r);
    auto rows = A.col_rows(q);
    auto vals = A.col_values(q);
    for (std::size_t t = 0; t < rows.size(); ++t) col[rows[t]] = vals[t];

    Eigen::VectorXd w = col;
    F.solve(w);
    const int p = replaced;  // deterministic slot choice
    if (std::abs(w[p]) < 1e-8) continue;
    REQUIRE(F.push_eta(p, w, 1e-10));
    basis[p] = q;
    ++replaced;

    check_identity_reproduction(A, basis, F);
    CHECK(F.updates_since_refactor() == replaced);
  }
  CHECK(replaced == 6);
}

TEST_CASE("singular bases are reported") {
  SparseMatrix A(3, 4);
  A.add(0, 0, 1.0);
  A.add(1, 0, 1.0);
  A.add(0, 1, 2.0);
  A.add(1, 1, 2.0);  // column 1 = 2 * column 0
  A.add(2, 2, 1.0);
  A.add(0, 3, 1.0);
  A.compress();

  FactorizedBasis F;
  CHECK_FALSE(F.factorize(A, {0, 1, 2}));
  CHECK_FALSE(F.ok());

  // A structurally empty column.
  SparseMatrix Z(2, 2);
  Z.add(0, 0, 1.0);
  Z.add(1, 0, 1.0);
  Z.compress();
  CHECK_FALSE(F.factorize(Z, {0, 1}));
}
