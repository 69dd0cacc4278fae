#include "bse/basis.hpp"

namespace bse {

template <typename Real>
PairedBasis<Real>::PairedBasis(Flavor f, Index n, Index capacity)
    : flavor(f),
      first(CMatrix<Real>::Zero(n, capacity)),
      second(CMatrix<Real>::Zero(n, capacity)) {
  if (f == Flavor::MN) {
    first_prime = CMatrix<Real>::Zero(n, capacity);
    second_prime = CMatrix<Real>::Zero(n, capacity);
  }
}

template <typename Real>
UvCoefficients<Real> structured_coeffs_uv(const CMatrix<Real>& U,
                                          const CMatrix<Real>& V, Index cols,
                                          const CVector<Real>& u) {
  if (U.rows() != u.size() || V.rows() != u.size() || cols > U.cols() ||
      cols > V.cols())
    throw DimensionMismatch("structured_coeffs_uv: inconsistent sizes");
  UvCoefficients<Real> out;
  out.c = (V.leftCols(cols).adjoint() * u).real();
  out.d_imag = (U.leftCols(cols).adjoint() * u).imag();
  return out;
}

template <typename Real>
CMatrix<Real> structured_gram(const PairedBasis<Real>& basis) {
  using CM = CMatrix<Real>;
  const Complex<Real> I(0, 1);
  Index p = basis.first_cols;
  Index q = basis.second_cols;
  if (basis.flavor != Flavor::MN) p = q = std::min(p, q);
  CM gram = CM::Zero(p + q, p + q);
  auto F = basis.first.leftCols(p);
  auto S = basis.second.leftCols(q);
  switch (basis.flavor) {
    case Flavor::UV: {
      gram.topLeftCorner(q, p) = Real(2) * (S.adjoint() * F).real().template cast<Complex<Real>>();
      gram.topRightCorner(q, q) = Real(2) * I * (S.adjoint() * S).imag().template cast<Complex<Real>>();
      gram.bottomLeftCorner(p, p) = Real(2) * I * (F.adjoint() * F).imag().template cast<Complex<Real>>();
      gram.bottomRightCorner(p, q) = Real(2) * (F.adjoint() * S).real().template cast<Complex<Real>>();
      break;
    }
    case Flavor::MN: {
      auto Fp = basis.first_prime.leftCols(p);
      auto Sp = basis.second_prime.leftCols(q);
      gram.topLeftCorner(p, p) = Real(2) * (Fp.adjoint() * F).real().template cast<Complex<Real>>();
      gram.topRightCorner(p, q) = Real(2) * I * (Fp.adjoint() * S).imag().template cast<Complex<Real>>();
      gram.bottomLeftCorner(q, p) = Real(2) * I * (Sp.adjoint() * F).imag().template cast<Complex<Real>>();
      gram.bottomRightCorner(q, q) = Real(2) * (Sp.adjoint() * S).real().template cast<Complex<Real>>();
      break;
    }
    case Flavor::WZ: {
      gram.topLeftCorner(p, p) = F.adjoint() * F - S.adjoint() * S;
      gram.topRightCorner(p, p) = F.adjoint() * S.conjugate() - S.adjoint() * F.conjugate();
      gram.bottomLeftCorner(p, p) = F.transpose() * S - S.transpose() * F;
      gram.bottomRightCorner(p, p) = F.transpose() * F.conjugate() - S.transpose() * S.conjugate();
      break;
    }
  }
  return gram;
}

template <typename Real>
Real orthogonality_defect(const PairedBasis<Real>& basis) {
  CMatrix<Real> gram = structured_gram(basis);
  const Real target = basis.flavor == Flavor::UV ? Real(2) : Real(1);
  gram.diagonal().array() -= target;
  return gram.size() == 0 ? Real(0) : gram.cwiseAbs().maxCoeff();
}

#define BSE_INSTANTIATE(Real)                                                 \
  template struct PairedBasis<Real>;                                          \
  template UvCoefficients<Real> structured_coeffs_uv<Real>(                   \
      const CMatrix<Real>&, const CMatrix<Real>&, Index, const CVector<Real>&); \
  template CMatrix<Real> structured_gram<Real>(const PairedBasis<Real>&);     \
  template Real orthogonality_defect<Real>(const PairedBasis<Real>&);

BSE_INSTANTIATE(float)
BSE_INSTANTIATE(double)

}  // namespace bse
