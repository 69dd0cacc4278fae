#pragma once

#include "bse/types.hpp"

namespace bse {

/// Which structured 2n-column pattern a pair of n-vector collections encodes.
///
///   UV:  [U  V; conj(U) -conj(V)]   Gram identity 2I (plain inner product
///        against the companion [V U; conj(V) -conj(U)])
///   MN:  [M  N; conj(M) -conj(N)]   Gram identity I in the signature
///        inner product against the primed companion
///        [M' N'; -conj(M') conj(N')]
///   WZ:  [W  conj(Z); Z conj(W)]     Gram identity I against
///        [W -conj(Z); -Z conj(W)]
enum class Flavor { UV, MN, WZ };

/// Two collections of complex n-vectors stored as column blocks with a fixed
/// capacity. Only the leading `first_cols` / `second_cols` columns are live.
/// The MN flavor additionally carries the primed companions
/// M' = R M + C conj(M) and N' = R N - C conj(N).
template <typename Real>
struct PairedBasis {
  Flavor flavor = Flavor::UV;
  CMatrix<Real> first;
  CMatrix<Real> second;
  CMatrix<Real> first_prime;   // MN only
  CMatrix<Real> second_prime;  // MN only
  Index first_cols = 0;
  Index second_cols = 0;

  PairedBasis() = default;
  PairedBasis(Flavor f, Index n, Index capacity);

  Index rows() const { return first.rows(); }
  Index capacity() const { return first.cols(); }
};

/// Expansion coefficients of u against the UV basis formed by the leading
/// `cols` columns: c = Re(V^* u) and d = i * Im(U^* u). Only the imaginary
/// part of d is returned.
template <typename Real>
struct UvCoefficients {
  RVector<Real> c;
  RVector<Real> d_imag;
};

template <typename Real>
UvCoefficients<Real> structured_coeffs_uv(const CMatrix<Real>& U,
                                          const CMatrix<Real>& V, Index cols,
                                          const CVector<Real>& u);

/// Max-entry deviation of the flavor's Gram identity, computed from the live
/// columns through block inner products.
template <typename Real>
Real orthogonality_defect(const PairedBasis<Real>& basis);

/// Gram matrix behind orthogonality_defect, useful for diagnostics. Square of
/// size first_cols + second_cols (rectangular blocks allowed).
template <typename Real>
CMatrix<Real> structured_gram(const PairedBasis<Real>& basis);

}  // namespace bse
