#pragma once

#include <string>

#include "bse/config.hpp"
#include "bse/operator.hpp"

namespace bse {

/// Approximate eigentriplets of a definite BSE matrix.
///
/// Only the positive half of the spectrum is stored. For each positive value
/// lambda_i the right eigenvector is [x1_i; x2_i]; the eigenvector of
/// -lambda_i is [conj(x2_i); conj(x1_i)] and the left eigenvectors follow the
/// sign pattern
///
///     Y = [ X1  -conj(X2) ]
///         [-X2   conj(X1) ].
///
/// Columns of x1/x2 are scaled so that every right (and left) eigenvector has
/// unit 2-norm.
template <typename Real>
struct EigResult {
  std::string solver;
  RVector<Real> values;  // positive Ritz values, wanted end first
  CMatrix<Real> x1;
  CMatrix<Real> x2;
  RVector<Real> couplings;           // |b_i| as used by the convergence test
  RVector<Real> residual_estimates;  // rho |b_i|, for the unscaled vectors
  RVector<Real> vector_norms;        // 2-norms of the unscaled vectors
  Index restarts = 0;
  Index nconv = 0;
  Index breakdowns = 0;
  Status status = Status::NotConverged;

  Index pairs() const { return values.size(); }
};

/// Eigenvalues in the order [+l_1 .. +l_m, -l_1 .. -l_m].
template <typename Real>
RVector<Real> signed_eigenvalues(const EigResult<Real>& res);

/// 2n x 2m right eigenvectors in the signed_eigenvalues order.
template <typename Real>
CMatrix<Real> right_eigenvectors(const EigResult<Real>& res);

/// 2n x 2m left eigenvectors in the signed_eigenvalues order.
template <typename Real>
CMatrix<Real> left_eigenvectors(const EigResult<Real>& res);

/// True residual norms of every returned triplet.
template <typename Real>
struct TripletResiduals {
  RVector<Real> right;  // ||H x - l x||, 2m entries
  RVector<Real> left;   // ||y^* H - l y^*||
};

template <typename Real>
TripletResiduals<Real> triplet_residuals(const BseOperator<Real>& op,
                                         const EigResult<Real>& res);

/// Largest of the right/left residuals divided by |lambda|.
template <typename Real>
Real max_relative_residual(const BseOperator<Real>& op, const EigResult<Real>& res);

/// max |Y^* X - diag(y_i^* x_i)| over all 2m returned vectors.
template <typename Real>
Real biorthogonality(const EigResult<Real>& res);

/// Fills values/x1/x2/norms from unscaled blocks and normalizes them.
template <typename Real>
void set_eigenvectors(EigResult<Real>& res, RVector<Real> values,
                      CMatrix<Real> x1, CMatrix<Real> x2);

}  // namespace bse
