#include <random>

#include "doctest.h"
#include "test_support.hpp"

using namespace bse;
using namespace bse::test;

namespace {

SymTridiag<double> random_tridiag(Index k, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> off(0.1, 1.0);
  SymTridiag<double> T;
  T.diag = RVd(k);
  T.offdiag = RVd(k - 1);
  for (Index i = 0; i + 1 < k; ++i) T.offdiag(i) = off(rng);
  for (Index i = 0; i < k; ++i) T.diag(i) = 2.5 + off(rng);
  return T;
}

LowerBidiag<double> random_bidiag(Index k, unsigned seed, double diag_lo = 0.1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> diag(diag_lo, 2.0), sub(0.1, 1.0);
  LowerBidiag<double> L;
  L.diag = RVd(k);
  L.subdiag = RVd(k - 1);
  for (Index i = 0; i < k; ++i) L.diag(i) = diag(rng);
  for (Index i = 0; i + 1 < k; ++i) L.subdiag(i) = sub(rng);
  return L;
}

double max_rel(const RVd& a, const RVd& b) {
  return ((a - b).array().abs() / b.array().abs()).maxCoeff();
}

}  // namespace

TEST_CASE("tridiag_eig of a 1x1 matrix") {
  SymTridiag<double> T;
  T.diag = RVd::Constant(1, 3.7);
  T.offdiag = RVd(0);
  const auto f = tridiag_eig(T, Order::SmallestFirst);
  CHECK(f.values(0) == 3.7);
  CHECK(std::abs(f.vectors(0, 0)) == 1.0);
}

TEST_CASE("tridiag_eig of a 2x2 matrix") {
  SymTridiag<double> T;
  T.diag = RVd::Constant(2, 2.0);
  T.offdiag = RVd::Constant(1, 1.0);
  const auto f = tridiag_eig(T, Order::SmallestFirst);
  CHECK(f.values(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f.values(1) == doctest::Approx(3.0).epsilon(1e-15));
  const double s = 1 / std::sqrt(2.0);
  CHECK(std::abs(f.vectors(0, 0)) == doctest::Approx(s).epsilon(1e-15));
  CHECK(f.vectors(0, 0) * f.vectors(1, 0) < 0);
  CHECK(f.vectors(0, 1) * f.vectors(1, 1) > 0);
  const auto g = tridiag_eig(T, Order::LargestFirst);
  CHECK(g.values(0) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("tridiag_eig matches a dense symmetric eigensolver") {
  for (unsigned seed : {1u, 2u, 3u}) {
    const auto T = random_tridiag(30, seed);
    const auto f = tridiag_eig(T, Order::SmallestFirst);
    Eigen::SelfAdjointEigenSolver<RMd> ref(T.dense());
    CHECK(max_rel(f.values, ref.eigenvalues()) <= 1e-13);
    CHECK(std::abs(f.values.sum() - T.diag.sum()) <= 1e-13 * std::abs(T.diag.sum()));
    const RMd QtQ = f.vectors.transpose() * f.vectors;
    CHECK((QtQ - RMd::Identity(30, 30)).cwiseAbs().maxCoeff() <= 100 * 30 * kEps);
    const RMd rec = f.vectors * f.values.asDiagonal() * f.vectors.transpose();
    CHECK((rec - T.dense()).cwiseAbs().maxCoeff() <= 1e-13 * T.dense().norm());
  }
}

TEST_CASE("tridiag_eig splits at zero off-diagonal entries") {
  auto T = random_tridiag(12, 7);
  T.offdiag(4) = 0;
  T.offdiag(9) = 0;
  const auto f = tridiag_eig(T, Order::SmallestFirst);
  Eigen::SelfAdjointEigenSolver<RMd> ref(T.dense());
  CHECK(max_rel(f.values, ref.eigenvalues()) <= 1e-13);
  SymTridiag<double> D;
  D.diag = RVd::LinSpaced(5, 1, 5);
  D.offdiag = RVd::Zero(4);
  const auto g = tridiag_eig(D, Order::LargestFirst);
  CHECK(g.values == RVd::LinSpaced(5, 5, 1));
}

TEST_CASE("sym_eig matches a dense symmetric eigensolver") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  RMd A(25, 25);
  for (Index i = 0; i < A.size(); ++i) A.data()[i] = nd(rng);
  A = (A + A.transpose()).eval();
  const auto f = sym_eig<double>(A, Order::SmallestFirst);
  Eigen::SelfAdjointEigenSolver<RMd> ref(A);
  CHECK((f.values - ref.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-13 * A.norm());
  const RMd rec = f.vectors * f.values.asDiagonal() * f.vectors.transpose();
  CHECK((rec - A).cwiseAbs().maxCoeff() <= 1e-13 * A.norm());
  // arrowhead matrices as produced by a thick restart
  RMd B = RMd::Zero(10, 10);
  for (Index i = 0; i < 10; ++i) B(i, i) = 1.0 + i;
  for (Index i = 0; i < 6; ++i) B(i, 6) = B(6, i) = 0.1 * (i + 1);
  for (Index i = 6; i < 9; ++i) B(i, i + 1) = B(i + 1, i) = 0.5;
  const auto h = sym_eig<double>(B, Order::LargestFirst);
  Eigen::SelfAdjointEigenSolver<RMd> refb(B);
  CHECK((h.values.reverse() - refb.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-13 * B.norm());
}

TEST_CASE("bidiag_svd of a 1x1 matrix") {
  LowerBidiag<double> L;
  L.diag = RVd::Constant(1, 1.7);
  L.subdiag = RVd(0);
  const auto f = bidiag_svd(L, Order::SmallestFirst);
  CHECK(f.values(0) == 1.7);
}

TEST_CASE("bidiag_svd of a 2x2 matrix") {
  LowerBidiag<double> L;
  L.diag = RVd::Constant(2, 1.0);
  L.subdiag = RVd::Constant(1, 1.0);
  const auto f = bidiag_svd(L, Order::SmallestFirst);
  CHECK(f.values(0) == doctest::Approx(std::sqrt((3 - std::sqrt(5.0)) / 2)).epsilon(1e-15));
  CHECK(f.values(1) == doctest::Approx(std::sqrt((3 + std::sqrt(5.0)) / 2)).epsilon(1e-15));
  const RMd rec = f.left * f.values.asDiagonal() * f.right.transpose();
  CHECK((rec - L.dense()).cwiseAbs().maxCoeff() <= 1e-15 * 4);
}

TEST_CASE("bidiag_svd squares match the Gram matrix spectrum") {
  // diagonal bounded away from zero keeps the Gram oracle accurate
  for (unsigned seed : {11u, 12u}) {
    const auto L = random_bidiag(30, seed, 1.0);
    const auto f = bidiag_svd(L, Order::SmallestFirst);
    const RMd G = L.dense() * L.dense().transpose();
    SymTridiag<double> T;
    T.diag = G.diagonal();
    T.offdiag = G.diagonal(-1);
    const auto g = tridiag_eig(T, Order::SmallestFirst);
    CHECK(max_rel(f.values.array().square().matrix(), g.values) <= 1e-12);
    CHECK(std::abs(f.values.array().log().sum() - L.diag.array().log().sum()) <= 1e-12);
    const RMd rec = f.left * f.values.asDiagonal() * f.right.transpose();
    CHECK((rec - L.dense()).cwiseAbs().maxCoeff() <= 1e-13 * L.dense().norm());
    CHECK((f.left.transpose() * f.left - RMd::Identity(30, 30)).cwiseAbs().maxCoeff() <=
          100 * 30 * kEps);
    CHECK((f.right.transpose() * f.right - RMd::Identity(30, 30)).cwiseAbs().maxCoeff() <=
          100 * 30 * kEps);
  }
}

TEST_CASE("bidiag_svd keeps the determinant on ill-conditioned input") {
  for (unsigned seed : {21u, 22u, 23u}) {
    const auto L = random_bidiag(30, seed, 0.01);
    const auto f = bidiag_svd(L, Order::SmallestFirst);
    CHECK(std::abs(f.values.array().log().sum() - L.diag.array().log().sum()) <= 1e-12);
    Eigen::JacobiSVD<RMd> ref(L.dense());
    CHECK((f.values.reverse() - ref.singularValues()).cwiseAbs().maxCoeff() <=
          1e-13 * ref.singularValues()(0));
  }
}

TEST_CASE("bidiag_svd resolves tiny singular values to high relative accuracy") {
  LowerBidiag<double> L;
  L.diag = RVd(4);
  L.diag << 1e-9, 1.0, 1.0, 1.0;
  L.subdiag = RVd::Constant(3, 1e-3);
  const auto f = bidiag_svd(L, Order::SmallestFirst);
  // det(L) = product of singular values
  CHECK(std::abs(f.values.prod() - 1e-9) <= 1e-12 * 1e-9);
  CHECK(f.values(0) > 0);
}

TEST_CASE("dense_svd matches Jacobi SVD") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> nd;
  RMd A(20, 20);
  for (Index i = 0; i < A.size(); ++i) A.data()[i] = nd(rng);
  const auto f = dense_svd<double>(A, Order::LargestFirst);
  Eigen::JacobiSVD<RMd> ref(A);
  CHECK((f.values - ref.singularValues()).cwiseAbs().maxCoeff() <= 1e-13 * A.norm());
  const RMd rec = f.left * f.values.asDiagonal() * f.right.transpose();
  CHECK((rec - A).cwiseAbs().maxCoeff() <= 1e-13 * A.norm());
  const auto g = dense_svd<double>(A, Order::SmallestFirst);
  CHECK(g.values(0) == doctest::Approx(ref.singularValues()(19)).epsilon(1e-12));
}

TEST_CASE("cholesky_relation_check") {
  SymTridiag<double> T;
  T.diag = RVd::Constant(1, 1.3 * 1.3);
  T.offdiag = RVd(0);
  LowerBidiag<double> L;
  L.diag = RVd::Constant(1, 1.3);
  L.subdiag = RVd(0);
  CHECK(cholesky_relation_check(T, L) == 0.0);
  const auto T2 = random_tridiag(6, 1);
  const auto L2 = random_bidiag(6, 2);
  CHECK(cholesky_relation_check(T2, L2) > 0.01);
  const RMd Ld = L2.dense();
  CHECK(cholesky_relation_check<double>(Ld * Ld.transpose(), Ld) <= 1e-15 * 16);
}

TEST_CASE("stable_order keeps ties in index order") {
  RVd v(6);
  v << 2, 1, 2, 0, 1, 2;
  const auto up = stable_order(v, Order::SmallestFirst);
  CHECK(up == std::vector<Index>{3, 1, 4, 0, 2, 5});
  const auto down = stable_order(v, Order::LargestFirst);
  CHECK(down == std::vector<Index>{0, 2, 5, 1, 4, 3});
}

TEST_CASE("equal eigenvalues keep their order in the factor") {
  SymTridiag<double> T;
  T.diag = RVd::Constant(4, 2.0);
  T.offdiag = RVd::Zero(3);
  const auto f = tridiag_eig(T, Order::SmallestFirst);
  CHECK((f.vectors - RMd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single precision factorizations") {
  const auto T = random_tridiag(20, 4);
  SymTridiag<float> Tf;
  Tf.diag = T.diag.cast<float>();
  Tf.offdiag = T.offdiag.cast<float>();
  const auto f = tridiag_eig(Tf, Order::SmallestFirst);
  Eigen::SelfAdjointEigenSolver<RMd> ref(T.dense());
  CHECK(max_rel(f.values.cast<double>(), ref.eigenvalues()) <= 1e-5);
}
