#include "doctest.h"
#include "test_support.hpp"

using namespace bse;
using namespace bse::test;

TEST_CASE("assembly of a scalar problem") {
  const CMd H = assemble_h(scalar_op(2.0, 0.2));
  CMd ref(2, 2);
  ref << 2.0, 0.2, -0.2, -2.0;
  CHECK(H == ref);
  const CMd Hh = assemble_h_hat(scalar_op(2.0, 0.2));
  CHECK(Hh(1, 0) == Cd(0.2));
  CHECK(Hh(1, 1) == Cd(2.0));
}

TEST_CASE("assembly with complex blocks") {
  CMd R(2, 2), C(2, 2);
  R << 3.0, Cd(0.5, 0.25), Cd(0.5, -0.25), 2.0;
  C << Cd(0.1, 0.3), Cd(0.2, -0.4), Cd(0.2, -0.4), Cd(-0.1, 0.2);
  const BseOperator<double> op(R, C);
  const CMd H = assemble_h(op);
  CHECK(H.topLeftCorner(2, 2) == R);
  CHECK(H.topRightCorner(2, 2) == C);
  CHECK(H.bottomLeftCorner(2, 2) == -C.conjugate());
  CHECK(H.bottomRightCorner(2, 2) == -R.conjugate());
}

TEST_CASE("assembled matrix is consistent with the kernels") {
  const auto op = pentadiag(8);
  const CMd H = assemble_h(op);
  Rng rng(3);
  const CVd u = random_complex_vector<double>(rng, 8);
  CVd x(16);
  x << u, u.conjugate();
  CHECK(((H * x).head(8) - op.apply_plus(u)).norm() <= 1e-14 * u.norm() * 10);
}

TEST_CASE("dense eigendecomposition of a scalar problem") {
  const auto dec = dense_solve(scalar_op(2.0, 0.2));
  REQUIRE(dec.values.size() == 2);
  std::vector<double> v{dec.values(0).real(), dec.values(1).real()};
  std::sort(v.begin(), v.end());
  CHECK(v[0] == doctest::Approx(-std::sqrt(3.96)).epsilon(1e-14));
  CHECK(v[1] == doctest::Approx(std::sqrt(3.96)).epsilon(1e-14));
  CHECK(dec.definiteness == Definiteness::Definite);
}

TEST_CASE("definite instances have real paired spectra") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto op = gen_random_definite<double>(8, seed);
    const CMd H = assemble_h(op);
    const auto dec = dense_eig<double>(H);
    const double hn = norm2(H);
    for (Index i = 0; i < 16; ++i) {
      CHECK(std::abs(dec.values(i).imag()) <= 1e-10);
      const double gap = (dec.values.array() + dec.values(i)).abs().minCoeff();
      CHECK(gap <= 1e-10);
      const CVd x = dec.right_vectors.col(i);
      CHECK((H * x - dec.values(i) * x).norm() <= 1e-10 * hn);
    }
  }
}

TEST_CASE("swap-conjugate of a positive eigenvector belongs to the negative eigenvalue") {
  const auto op = gen_random_definite<double>(10, 4);
  const CMd H = assemble_h(op);
  const auto dec = dense_eig<double>(H);
  const double hn = norm2(H);
  for (Index i = 0; i < 20; ++i) {
    if (dec.values(i).real() < 0) continue;
    const CVd x = dec.right_vectors.col(i);
    CVd y(20);
    y << x.tail(10).conjugate(), x.head(10).conjugate();
    CHECK((H * y + dec.values(i).real() * y).norm() <= 1e-9 * hn);
  }
}

TEST_CASE("dominant coupling produces complex eigenvalues") {
  CMd R = CMd::Identity(8, 8);
  CMd C = CMd::Zero(8, 8);
  for (Index i = 0; i < 8; ++i) C(i, i) = 1.5;
  for (Index i = 0; i + 1 < 8; ++i) C(i, i + 1) = C(i + 1, i) = 0.1;
  const BseOperator<double> op(R, C);
  const auto dec = dense_solve(op);
  CHECK(dec.values.imag().cwiseAbs().maxCoeff() > 0.1);
  CHECK(dec.definiteness == Definiteness::Indefinite);
}

TEST_CASE("definiteness verdicts") {
  CHECK(definiteness_check(scalar_op(2.0, 0.2)) == Definiteness::Definite);
  CHECK(definiteness_check(scalar_op(0.1, 0.2)) == Definiteness::Indefinite);
  CHECK(definiteness_check(scalar_op(1.0, 1.0)) == Definiteness::Borderline);
  CHECK(definiteness_check(pentadiag(64)) == Definiteness::Definite);
  CHECK(definiteness_check(gen_random_definite<double>(16, 7)) == Definiteness::Definite);
  CHECK(definiteness_check(gen_random_definite<double>(16, 7, 2.0)) == Definiteness::Indefinite);
}

TEST_CASE("greedy eigenvalue matching") {
  CVd exact(4);
  exact << 3.0, -1.0, 1.0, 2.0;
  RVd approx(3);
  approx << 1.0 + 1e-12, 2.0, 5.0;
  const auto m = match_eigenvalues<double>(approx, exact);
  CHECK(m[0] == 2);
  CHECK(m[1] == 3);
  CHECK(m[2] == -1);
  RVd twice(2);
  twice << 1.0, 1.0;
  const auto d = match_eigenvalues<double>(twice, exact, 1.0);
  CHECK(d[0] == 2);
  CHECK(d[1] != 2);
}

TEST_CASE("size guard") {
  const auto op = pentadiag(kDenseGuard + 1);
  CHECK_THROWS_AS(assemble_h(op), SizeGuardExceeded);
  CHECK_THROWS_AS(definiteness_check(op), SizeGuardExceeded);
  CHECK_THROWS_AS(dense_eig<double>(CMd::Zero(2, 3)), DimensionMismatch);
}
