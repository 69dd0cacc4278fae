#include "bse/oracle.hpp"

#include <limits>

#include <Eigen/Eigenvalues>

namespace bse {

namespace {

template <typename Real>
void guard(const BseOperator<Real>& op) {
  if (op.size() > kDenseGuard)
    throw SizeGuardExceeded("dense oracle: n = " + std::to_string(op.size()) +
                            " exceeds the limit of " + std::to_string(kDenseGuard));
}

}  // namespace

std::string to_string(Definiteness d) {
  switch (d) {
    case Definiteness::Definite:
      return "definite";
    case Definiteness::Borderline:
      return "borderline";
    case Definiteness::Indefinite:
      return "indefinite";
  }
  return "unknown";
}

template <typename Real>
CMatrix<Real> assemble_h(const BseOperator<Real>& op) {
  guard(op);
  const Index n = op.size();
  const CMatrix<Real> R = block_to_dense(op.r());
  const CMatrix<Real> C = block_to_dense(op.c());
  CMatrix<Real> H(2 * n, 2 * n);
  H << R, C, -C.conjugate(), -R.conjugate();
  return H;
}

template <typename Real>
CMatrix<Real> assemble_h_hat(const BseOperator<Real>& op) {
  guard(op);
  const Index n = op.size();
  const CMatrix<Real> R = block_to_dense(op.r());
  const CMatrix<Real> C = block_to_dense(op.c());
  CMatrix<Real> H(2 * n, 2 * n);
  H << R, C, C.conjugate(), R.conjugate();
  return H;
}

template <typename Real>
DenseEigenDecomposition<Real> dense_eig(const CMatrix<Real>& Hd) {
  if (Hd.rows() != Hd.cols()) throw DimensionMismatch("dense_eig: matrix is not square");
  Eigen::ComplexEigenSolver<CMatrix<Real>> solver(Hd, true);
  if (solver.info() != Eigen::Success)
    throw NonConvergence("dense_eig: complex Schur iteration did not converge");
  DenseEigenDecomposition<Real> out;
  out.values = solver.eigenvalues();
  out.right_vectors = solver.eigenvectors();
  out.right_vectors.colwise().normalize();
  return out;
}

template <typename Real>
Definiteness definiteness_check(const BseOperator<Real>& op) {
  const CMatrix<Real> Hh = assemble_h_hat(op);
  const Real tau = std::sqrt(std::numeric_limits<Real>::epsilon()) *
                   Hh.cwiseAbs().rowwise().sum().maxCoeff();
  const CMatrix<Real> I = CMatrix<Real>::Identity(Hh.rows(), Hh.cols());
  auto pd = [&](const CMatrix<Real>& A) {
    Eigen::LLT<CMatrix<Real>> llt(A);
    return llt.info() == Eigen::Success;
  };
  if (pd(Hh - tau * I)) return Definiteness::Definite;
  if (pd(Hh + tau * I)) return Definiteness::Borderline;
  return Definiteness::Indefinite;
}

template <typename Real>
DenseEigenDecomposition<Real> dense_solve(const BseOperator<Real>& op) {
  DenseEigenDecomposition<Real> out = dense_eig<Real>(assemble_h(op));
  out.definiteness = definiteness_check(op);
  return out;
}

template <typename Real>
std::vector<Index> match_eigenvalues(const RVector<Real>& approx, const CVector<Real>& exact,
                                     Real gate) {
  std::vector<Index> out(approx.size(), -1);
  std::vector<bool> used(exact.size(), false);
  const Real tiny = std::numeric_limits<Real>::min();
  for (Index i = 0; i < approx.size(); ++i) {
    Index best = -1;
    Real gap = std::numeric_limits<Real>::infinity();
    for (Index j = 0; j < exact.size(); ++j) {
      if (used[j]) continue;
      const Real g = std::abs(Complex<Real>(approx(i)) - exact(j));
      if (g < gap) {
        gap = g;
        best = j;
      }
    }
    if (best >= 0 && gap <= gate * std::max(std::abs(exact(best)), tiny)) {
      out[i] = best;
      used[best] = true;
    }
  }
  return out;
}

#define BSE_INSTANTIATE(Real)                                                           \
  template CMatrix<Real> assemble_h<Real>(const BseOperator<Real>&);                    \
  template CMatrix<Real> assemble_h_hat<Real>(const BseOperator<Real>&);                \
  template DenseEigenDecomposition<Real> dense_eig<Real>(const CMatrix<Real>&);         \
  template Definiteness definiteness_check<Real>(const BseOperator<Real>&);             \
  template DenseEigenDecomposition<Real> dense_solve<Real>(const BseOperator<Real>&);   \
  template std::vector<Index> match_eigenvalues<Real>(const RVector<Real>&,             \
                                                      const CVector<Real>&, Real);

BSE_INSTANTIATE(float)
BSE_INSTANTIATE(double)

}  // namespace bse
