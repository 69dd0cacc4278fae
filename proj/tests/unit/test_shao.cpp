#include "doctest.h"
#include "test_support.hpp"

using namespace bse;
using namespace bse::test;

namespace {

double true_residual(const BseOperator<double>& op, const EigResult<double>& res, Index i) {
  const CVd x1 = res.x1.col(i), x2 = res.x2.col(i);
  auto [h1, h2] = op.apply_h(x1, x2);
  const double l = res.values(i);
  return std::sqrt((h1 - l * x1).squaredNorm() + (h2 - l * x2).squaredNorm());
}

}  // namespace

TEST_CASE("scalar problem: first step and Ritz value") {
  const auto op = scalar_op(2.0, 0.2);
  auto cfg = config(2, 1);
  cfg.initial_vector = CVd::Ones(1);
  auto s = shao_init(op, cfg);
  CHECK(s.basis.first(0, 0).real() == doctest::Approx(1 / std::sqrt(2.2)).epsilon(1e-15));
  CHECK(s.basis.second(0, 0).real() == doctest::Approx(std::sqrt(2.2)).epsilon(1e-15));
  shao_extend(op, s);
  CHECK(s.T(0, 0) == doctest::Approx(3.96).epsilon(1e-15));
  CHECK(s.beta_last == 0.0);
  const auto res = shao_solve(op, cfg);
  CHECK(res.status == Status::Converged);
  REQUIRE(res.pairs() == 1);
  CHECK(std::abs(res.values(0) - std::sqrt(3.96)) <= 1e-14);
  CHECK(true_residual(op, res, 0) <= 1e-14);
  CHECK(max_relative_residual(op, res) <= 1e-14);
}

TEST_CASE("scalar problem with complex coupling") {
  const auto op = scalar_op(3.0, Cd(1.2, -0.9));
  const auto res = shao_solve(op, config(2, 1));
  REQUIRE(res.pairs() == 1);
  CHECK(std::abs(res.values(0) - std::sqrt(9.0 - std::norm(Cd(1.2, -0.9)))) <= 1e-14);
  CHECK(true_residual(op, res, 0) <= 1e-14);
}

TEST_CASE("scalar indefinite problem is rejected") {
  const auto op = scalar_op(0.1, 0.2);
  CHECK_THROWS_AS(shao_solve(op, config(2, 1)), IndefiniteProblem);
}

TEST_CASE("unrestarted decomposition on pentadiag 200") {
  const auto op = pentadiag(200);
  auto s = shao_init(op, config(2, 20));
  shao_extend(op, s);
  CHECK(s.size == 20);
  Eigen::SelfAdjointEigenSolver<RMd> eig(s.T);
  CHECK(eig.eigenvalues().minCoeff() > 0);
  CHECK(orthogonality_defect(s.basis) <= 1e-12);
  for (Index j = 0; j + 1 < 20; ++j) CHECK(s.T(j + 1, j) > 0);
  CHECK(s.beta_last > 0);
}

TEST_CASE("decomposition relation holds before and after a restart") {
  const auto op = gen_random_definite<double>(32, 31);
  const double hn = norm2(assemble_h(op));
  auto s = shao_init(op, config(2, 16));
  for (Index j = 0; j < 5; ++j) shao_extend_step(op, s);
  CHECK(shao_relation_residual(op, s) <= 1e-12 * hn);
  shao_extend(op, s);
  CHECK(shao_relation_residual(op, s) <= 1e-12 * hn);
  shao_restart(s, 10, Which::Smallest);
  CHECK(s.size == 10);
  CHECK(shao_relation_residual(op, s) <= 1e-12 * hn);
  CHECK(orthogonality_defect(s.basis) <= 1e-12);
  for (Index j = 0; j < 3; ++j) shao_extend_step(op, s);
  CHECK(shao_relation_residual(op, s) <= 1e-12 * hn);
  shao_extend(op, s);
  CHECK(shao_relation_residual(op, s) <= 1e-12 * hn);
  shao_restart(s, 10, Which::Smallest);
  CHECK(shao_relation_residual(op, s) <= 1e-12 * hn);
  CHECK(orthogonality_defect(s.basis) <= 1e-12);
}

TEST_CASE("restart couplings come from the last eigenvector row") {
  const auto op = pentadiag(60);
  auto s = shao_init(op, config(2, 12));
  shao_extend(op, s);
  const RMd T = s.T;
  const double beta = s.beta_last;
  Eigen::SelfAdjointEigenSolver<RMd> eig(T);
  shao_restart(s, 5, Which::Smallest);
  for (Index i = 0; i < 5; ++i) {
    CHECK(s.ritz(i) == doctest::Approx(eig.eigenvalues()(i)).epsilon(1e-12));
    CHECK(std::abs(s.b(i)) == doctest::Approx(beta * std::abs(eig.eigenvectors()(11, i))).epsilon(1e-10));
    CHECK(s.T(5, i) == s.b(i));
    CHECK(s.T(i, 5) == s.b(i));
  }
}

TEST_CASE("full-size restart is a rotation") {
  const auto op = pentadiag(50);
  auto s = shao_init(op, config(2, 10));
  shao_extend(op, s);
  Eigen::SelfAdjointEigenSolver<RMd> before(s.T);
  const double hn = norm2(assemble_h(op));
  shao_restart(s, 10, Which::Smallest);
  CHECK(s.r == 10);
  for (Index i = 0; i < 10; ++i)
    CHECK(s.ritz(i) == doctest::Approx(before.eigenvalues()(i)).epsilon(1e-12));
  CHECK(shao_relation_residual(op, s) <= 1e-12 * hn);
  CHECK(orthogonality_defect(s.basis) <= 1e-12);
}

TEST_CASE("retained Ritz values persist into the next cycle") {
  const auto op = pentadiag(200);
  auto s = shao_init(op, config(2, 20));
  shao_extend(op, s);
  shao_restart(s, 10, Which::Smallest);
  const RVd kept = s.ritz;
  shao_extend(op, s);
  // the leading block of the next decomposition is exactly the retained one
  for (Index i = 0; i < 10; ++i) {
    CHECK(s.T(i, i) == kept(i));
    for (Index j = 0; j < 10; ++j)
      if (i != j) CHECK(s.T(i, j) == 0.0);
  }
  // converged directions reappear among the next Ritz values
  Eigen::SelfAdjointEigenSolver<RMd> next(s.T);
  for (Index i = 0; i < 10; ++i) {
    if (std::abs(s.b(i)) > 1e-8 * kept(i)) continue;
    const double gap = (next.eigenvalues().array() - kept(i)).abs().minCoeff();
    CHECK(gap <= 1e-12 * kept(i));
  }
}

TEST_CASE("convergence count stops at the first failure") {
  ShaoState<double> s;
  s.k = 3;
  s.r = 3;
  s.ritz = RVd::Ones(3);
  s.b = RVd::Zero(3);
  const auto cfg = config(2, 3, 1e-8);
  CHECK(shao_check_convergence(s, cfg) == 3);
  s.b << 1e-12, 1.0, 1e-12;
  CHECK(shao_check_convergence(s, cfg) == 1);
  auto abs_cfg = cfg;
  abs_cfg.criterion = Criterion::Absolute;
  s.ritz = RVd::Constant(3, 1e-18);
  s.b << 1e-12, 1e-12, 1e-7;
  CHECK(shao_check_convergence(s, cfg) == 0);
  CHECK(shao_check_convergence(s, abs_cfg) == 2);
}

TEST_CASE("random definite instance matches the oracle") {
  const auto op = gen_random_definite<double>(16, 7);
  const auto dec = dense_solve(op);
  auto cfg = config(8, 12, 1e-12);
  const auto res = shao_solve(op, cfg);
  CHECK(res.status == Status::Converged);
  REQUIRE(res.pairs() == 4);
  CHECK(oracle_deviation(res.values, dec.values) <= 1e-12);
  const double floor = 100 * kEps * op.norm_bound();
  for (Index i = 0; i < 4; ++i) {
    const double r = true_residual(op, res, i) * res.vector_norms(i);
    CHECK(r <= res.residual_estimates(i) * (1 + 1e-8) + floor * res.vector_norms(i));
  }
}

TEST_CASE("largest eigenvalues") {
  const auto op = gen_random_definite<double>(16, 8);
  auto cfg = config(4, 10, 1e-12);
  cfg.which = Which::Largest;
  const auto res = shao_solve(op, cfg);
  CHECK(res.status == Status::Converged);
  const auto ref = positive_oracle_values(op);
  CHECK(res.values(0) == doctest::Approx(ref.back()).epsilon(1e-12));
  CHECK(res.values(1) == doctest::Approx(ref[ref.size() - 2]).epsilon(1e-12));
}

TEST_CASE("absolute criterion") {
  const auto op = pentadiag(100);
  auto cfg = config(6, 20, 1e-9);
  cfg.criterion = Criterion::Absolute;
  const auto res = shao_solve(op, cfg);
  CHECK(res.status == Status::Converged);
  for (Index i = 0; i < 3; ++i) CHECK(res.couplings(i) < 1e-9);
}

TEST_CASE("breakdown from an invariant start vector is recovered") {
  CMd R = CMd::Zero(8, 8);
  for (Index i = 0; i < 8; ++i) R(i, i) = 1.0 + i;
  const BseOperator<double> op(R, CMd::Zero(8, 8));
  auto cfg = config(4, 5, 1e-12);
  cfg.initial_vector = CVd::Unit(8, 3);
  const auto res = shao_solve(op, cfg);
  CHECK(res.breakdowns >= 1);
  CHECK(res.status == Status::Converged);
  CHECK(res.values(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.values(1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(max_relative_residual(op, res) <= 1e-12);
}

TEST_CASE("restart cap yields a not-converged result") {
  const auto op = pentadiag(200);
  auto cfg = config(10, 12, 1e-12);
  cfg.max_restarts = 1;
  const auto res = shao_solve(op, cfg);
  CHECK(res.status == Status::NotConverged);
  CHECK(res.restarts == 1);
  CHECK(res.pairs() == 5);
}

TEST_CASE("progress is reported once per restart") {
  const auto op = pentadiag(100);
  std::vector<ProgressRecord> seen;
  const auto res = shao_solve(op, config(4, 10, 1e-10),
                              [&](const ProgressRecord& p) { seen.push_back(p); });
  REQUIRE(Index(seen.size()) == res.restarts);
  for (std::size_t i = 0; i < seen.size(); ++i) CHECK(seen[i].restart == Index(i) + 1);
  CHECK(seen.back().nconv >= 2);
}

TEST_CASE("seeded runs are reproducible") {
  const auto op = pentadiag(80);
  const auto a = shao_solve(op, config(4, 12));
  const auto b = shao_solve(op, config(4, 12));
  CHECK(a.values == b.values);
  CHECK(a.x1 == b.x1);
  auto other = config(4, 12);
  other.seed = 99;
  const auto c = shao_solve(op, other);
  CHECK(c.values(0) == doctest::Approx(a.values(0)).epsilon(1e-9));
}

TEST_CASE("single precision run") {
  PentadiagSpec spec;
  spec.n = 100;
  const auto op = gen_pentadiag<float>(spec);
  SolverConfig<float> cfg;
  cfg.nev = 4;
  cfg.ncv = 16;
  cfg.tol = 1e-4f;
  const auto res = shao_solve(op, cfg);
  CHECK(res.status == Status::Converged);
  const auto ref = positive_oracle_values(pentadiag(100));
  CHECK(std::abs(res.values(0) - ref[0]) <= 1e-4 * ref[0]);
}

TEST_CASE("invalid configurations are rejected") {
  const auto op = pentadiag(20);
  CHECK_THROWS_AS(shao_solve(op, config(3, 10)), InvalidConfig);
  CHECK_THROWS_AS(shao_solve(op, config(0, 10)), InvalidConfig);
  CHECK_THROWS_AS(shao_solve(op, config(4, 21)), InvalidConfig);
  CHECK_THROWS_AS(shao_solve(op, config(4, 10, 0.0)), InvalidConfig);
  CHECK_THROWS_AS(shao_solve(op, config(4, 10, 1e-8, 10)), InvalidConfig);
  CHECK_THROWS_AS(shao_solve(op, config(8, 10, 1e-8, 3)), InvalidConfig);
  CHECK_THROWS_AS(shao_solve(op, config(24, 10)), InvalidConfig);
}
