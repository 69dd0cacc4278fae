#include "bse/matgen.hpp"

#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "bse/rng.hpp"

namespace bse {

template <typename Real>
BseOperator<Real> gen_pentadiag(const PentadiagSpec& spec) {
  using Scalar = Complex<Real>;
  const Index n = spec.n;
  if (n < 3) throw InvalidConfig("pentadiag: n must be at least 3");
  if (spec.c.imag() != 0.0) throw InvalidConfig("pentadiag: diagonal coefficient c must be real");
  const Scalar a(spec.a), b(spec.b), c(spec.c), d(spec.d);
  std::vector<Eigen::Triplet<Scalar>> rt, ct;
  rt.reserve(5 * n);
  ct.reserve(3 * n);
  for (Index i = 0; i < n; ++i) {
    rt.emplace_back(i, i, c);
    ct.emplace_back(i, i, d);
    if (i >= 1) {
      rt.emplace_back(i, i - 1, b);
      rt.emplace_back(i - 1, i, std::conj(b));
      ct.emplace_back(i, i - 1, b);
      ct.emplace_back(i - 1, i, b);
    }
    if (i >= 2) {
      rt.emplace_back(i, i - 2, a);
      rt.emplace_back(i - 2, i, std::conj(a));
    }
  }
  CSparse<Real> R(n, n), C(n, n);
  R.setFromTriplets(rt.begin(), rt.end());
  C.setFromTriplets(ct.begin(), ct.end());
  R.makeCompressed();
  C.makeCompressed();
  return BseOperator<Real>(std::move(R), std::move(C));
}

template <typename Real>
BseOperator<Real> gen_random_definite(Index n, std::uint64_t seed, double margin) {
  if (n < 1) throw InvalidConfig("random instance: n must be positive");
  if (!(margin >= 0.0)) throw InvalidConfig("random instance: margin must be nonnegative");
  using CM = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic>;
  Rng rng(seed);
  CM A(n, n), B(n, n);
  for (Index j = 0; j < n; ++j)
    A.col(j) = random_complex_vector<double>(rng, n);
  for (Index j = 0; j < n; ++j)
    B.col(j) = random_complex_vector<double>(rng, n);

  CM R = A * A.adjoint() / double(n);
  R = ((R + R.adjoint()) / 2.0).eval();
  for (Index i = 0; i < n; ++i) R(i, i) = R(i, i).real();
  double delta = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double off = R.row(i).cwiseAbs().sum() - std::abs(R(i, i));
    delta = std::max(delta, off - R(i, i).real());
  }
  delta += 1.0;
  R.diagonal().array() += delta;
  const double g = Eigen::SelfAdjointEigenSolver<CM>(R, Eigen::EigenvaluesOnly).eigenvalues()(0);

  CM C = (B + B.transpose()) / 2.0;
  const double norm = Eigen::BDCSVD<CM>(C).singularValues()(0);
  C *= margin * g / norm;

  CMatrix<Real> Rr = R.cast<Complex<Real>>();
  CMatrix<Real> Cr = C.cast<Complex<Real>>();
  return BseOperator<Real>(std::move(Rr), std::move(Cr));
}

#define BSE_INSTANTIATE(Real)                                                   \
  template BseOperator<Real> gen_pentadiag<Real>(const PentadiagSpec&);         \
  template BseOperator<Real> gen_random_definite<Real>(Index, std::uint64_t, double);

BSE_INSTANTIATE(float)
BSE_INSTANTIATE(double)

}  // namespace bse
