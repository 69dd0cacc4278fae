#pragma once

#include <vector>

#include "bse/types.hpp"

namespace bse {

enum class Order { SmallestFirst, LargestFirst };

/// Real symmetric tridiagonal matrix.
template <typename Real>
struct SymTridiag {
  RVector<Real> diag;     // k entries
  RVector<Real> offdiag;  // k-1 entries

  Index size() const { return diag.size(); }
  RMatrix<Real> dense() const;
};

/// Real lower bidiagonal matrix.
template <typename Real>
struct LowerBidiag {
  RVector<Real> diag;     // k entries
  RVector<Real> subdiag;  // k-1 entries

  Index size() const { return diag.size(); }
  RMatrix<Real> dense() const;
};

/// Eigendecomposition T = vectors * diag(values) * vectors^T.
template <typename Real>
struct SpectralFactor {
  RVector<Real> values;
  RMatrix<Real> vectors;
};

/// Singular value decomposition A = left * diag(values) * right^T.
template <typename Real>
struct SvdFactor {
  RVector<Real> values;
  RMatrix<Real> left;
  RMatrix<Real> right;
};

/// Implicit-shift QL with Wilkinson shifts and accumulation of the rotations.
/// Negligible off-diagonal entries split the problem. Throws NonConvergence
/// when a single eigenvalue needs more than 60 sweeps.
template <typename Real>
SpectralFactor<Real> tridiag_eig(const SymTridiag<Real>& T, Order order);

/// Dense symmetric eigendecomposition: Householder reduction to tridiagonal
/// form followed by tridiag_eig.
template <typename Real>
SpectralFactor<Real> sym_eig(const RMatrix<Real>& A, Order order);

/// Golub-Kahan implicit-shift SVD working on the bidiagonal directly.
template <typename Real>
SvdFactor<Real> bidiag_svd(const LowerBidiag<Real>& L, Order order);

/// Dense square SVD: Householder bidiagonalization followed by the
/// Golub-Kahan iteration.
template <typename Real>
SvdFactor<Real> dense_svd(const RMatrix<Real>& A, Order order);

/// max |T - L L^T|.
template <typename Real>
Real cholesky_relation_check(const RMatrix<Real>& T, const RMatrix<Real>& L);

template <typename Real>
Real cholesky_relation_check(const SymTridiag<Real>& T, const LowerBidiag<Real>& L) {
  return cholesky_relation_check<Real>(T.dense(), L.dense());
}

/// Permutation sorting `values` per `order`; equal values keep index order.
template <typename Real>
std::vector<Index> stable_order(const RVector<Real>& values, Order order);

}  // namespace bse
