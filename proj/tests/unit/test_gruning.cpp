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

// max column deviation of the stored primed bases from their definition
double primed_defect(const BseOperator<double>& op, const GruningState<double>& s) {
  double worst = 0;
  for (Index j = 0; j < s.basis.first_cols; ++j)
    worst = std::max(worst, (op.apply_plus(s.basis.first.col(j)) - s.basis.first_prime.col(j)).norm());
  for (Index j = 0; j < s.basis.second_cols; ++j)
    worst = std::max(worst,
                     (op.apply_minus(s.basis.second.col(j)) - s.basis.second_prime.col(j)).norm());
  return worst;
}

// Gram defect of the N columns alone against their primed companions.
double n_defect(const GruningState<double>& s) {
  const Index q = s.basis.second_cols;
  const CMd N = s.basis.second.leftCols(q);
  const CMd Np = s.basis.second_prime.leftCols(q);
  const RMd G = 2.0 * (Np.adjoint() * N).real();
  return (G - RMd::Identity(q, q)).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("scalar problem: singular value of the first step") {
  const auto op = scalar_op(2.0, 0.2);
  auto cfg = config(2, 1);
  cfg.initial_vector = CVd::Ones(1);
  auto s = gruning_init(op, cfg);
  gruning_extend(op, s);
  CHECK(s.L(0, 0) == doctest::Approx(std::sqrt(3.96)).epsilon(1e-15));
  const auto res = gruning_solve(op, cfg);
  CHECK(res.status == Status::Converged);
  REQUIRE(res.pairs() == 1);
  CHECK(std::abs(res.values(0) - std::sqrt(3.96)) <= 1e-14);
  CHECK(true_residual(op, res, 0) <= 1e-14);
  CHECK(max_relative_residual(op, res) <= 1e-14);
}

TEST_CASE("scalar indefinite problem is rejected") {
  CHECK_THROWS_AS(gruning_solve(scalar_op(0.1, 0.2), config(2, 1)), IndefiniteProblem);
  CHECK_THROWS_AS(gruning_solve(scalar_op(1.0, Cd(0, 1.5)), config(2, 1)), IndefiniteProblem);
}

TEST_CASE("unrestarted factor on pentadiag 200") {
  const auto op = pentadiag(200);
  auto s = gruning_init(op, config(2, 20));
  gruning_extend(op, s);
  CHECK(s.size == 20);
  for (Index j = 0; j < 20; ++j) CHECK(s.L(j, j) > 0);
  for (Index j = 0; j + 1 < 20; ++j) CHECK(s.L(j + 1, j) > 0);
  CHECK(orthogonality_defect(s.basis) <= 1e-12);
  CHECK(n_defect(s) <= 1e-10);
  CHECK(primed_defect(op, s) <= 100 * kEps * op.norm_bound());
}

TEST_CASE("L is the Cholesky factor of the Shao projection") {
  const auto op = pentadiag(100);
  const auto cfg = config(2, 10);
  auto sh = shao_init(op, cfg);
  auto gr = gruning_init(op, cfg);
  shao_extend(op, sh);
  gruning_extend(op, gr);
  CHECK(cholesky_relation_check<double>(sh.T, gr.L) <= 1e-12 * sh.T.norm());
}

TEST_CASE("decomposition relation holds before and after a restart") {
  const auto op = gen_random_definite<double>(32, 41);
  const double hn = norm2(assemble_h(op));
  auto s = gruning_init(op, config(2, 16));
  for (Index j = 0; j < 5; ++j) gruning_extend_step(op, s);
  CHECK(gruning_relation_residual(op, s) <= 1e-12 * hn);
  gruning_extend(op, s);
  CHECK(gruning_relation_residual(op, s) <= 1e-12 * hn);
  gruning_restart(s, 10, Which::Smallest);
  CHECK(gruning_relation_residual(op, s) <= 1e-12 * hn);
  CHECK(orthogonality_defect(s.basis) <= 1e-12);
  CHECK(primed_defect(op, s) <= 100 * kEps * op.norm_bound());
  gruning_extend(op, s);
  CHECK(gruning_relation_residual(op, s) <= 1e-12 * hn);
  gruning_restart(s, 10, Which::Smallest);
  CHECK(gruning_relation_residual(op, s) <= 1e-12 * hn);
  CHECK(orthogonality_defect(s.basis) <= 1e-12);
}

TEST_CASE("full-size restart keeps the singular values") {
  const auto op = pentadiag(50);
  auto s = gruning_init(op, config(2, 10));
  gruning_extend(op, s);
  Eigen::JacobiSVD<RMd> before(s.L);
  gruning_restart(s, 10, Which::Smallest);
  for (Index i = 0; i < 10; ++i)
    CHECK(s.ritz(i) == doctest::Approx(before.singularValues()(9 - i)).epsilon(1e-12));
  CHECK(gruning_relation_residual(op, s) <= 1e-12 * norm2(assemble_h(op)));
}

TEST_CASE("retained singular values persist into the next cycle") {
  const auto op = pentadiag(200);
  auto s = gruning_init(op, config(2, 20));
  gruning_extend(op, s);
  gruning_restart(s, 10, Which::Smallest);
  const RVd kept = s.ritz;
  const RVd b = s.b;
  gruning_extend(op, s);
  for (Index i = 0; i < 10; ++i) {
    CHECK(s.L(i, i) == kept(i));
    CHECK(s.L(10, i) == b(i));
  }
  Eigen::JacobiSVD<RMd> next(s.L);
  for (Index i = 0; i < 10; ++i) {
    if (std::abs(b(i)) > 1e-8 * kept(i)) continue;
    const double gap = (next.singularValues().array() - kept(i)).abs().minCoeff();
    CHECK(gap <= 1e-12 * kept(i));
  }
}

TEST_CASE("random definite instance matches the oracle") {
  const auto op = gen_random_definite<double>(16, 7);
  const auto dec = dense_solve(op);
  const auto res = gruning_solve(op, config(8, 12, 1e-12));
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
  const auto res = gruning_solve(op, cfg);
  CHECK(res.status == Status::Converged);
  const auto ref = positive_oracle_values(op);
  CHECK(res.values(0) == doctest::Approx(ref.back()).epsilon(1e-12));
}

TEST_CASE("memory contract: four n-vector bases") {
  const auto op = pentadiag(30);
  const auto s = gruning_init(op, config(2, 8));
  CHECK(s.basis.first.cols() == 9);
  CHECK(s.basis.second.cols() == 9);
  CHECK(s.basis.first_prime.cols() == 9);
  CHECK(s.basis.second_prime.cols() == 9);
}

TEST_CASE("restart cap yields a not-converged result") {
  auto cfg = config(10, 12, 1e-12);
  cfg.max_restarts = 2;
  const auto res = gruning_solve(pentadiag(200), cfg);
  CHECK(res.status == Status::NotConverged);
  CHECK(res.restarts == 2);
}
