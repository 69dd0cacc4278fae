#pragma once

#include <string>
#include <vector>

#include "bse/operator.hpp"

namespace bse {

/// Largest block size the dense oracle accepts.
inline constexpr Index kDenseGuard = 2048;

/// Full 2n x 2n matrix [[R, C], [-conj(C), -conj(R)]]. Throws
/// SizeGuardExceeded above kDenseGuard.
template <typename Real>
CMatrix<Real> assemble_h(const BseOperator<Real>& op);

/// Sign-stripped matrix [[R, C], [conj(C), conj(R)]].
template <typename Real>
CMatrix<Real> assemble_h_hat(const BseOperator<Real>& op);

enum class Definiteness { Definite, Borderline, Indefinite };

std::string to_string(Definiteness d);

/// Complete eigendecomposition from an unstructured dense solver.
template <typename Real>
struct DenseEigenDecomposition {
  CVector<Real> values;
  CMatrix<Real> right_vectors;  // unit 2-norm columns
  Definiteness definiteness = Definiteness::Definite;
};

/// General complex eigensolver, no structure assumed. `definiteness` is left
/// at its default; dense_solve fills it.
template <typename Real>
DenseEigenDecomposition<Real> dense_eig(const CMatrix<Real>& Hd);

/// Cholesky attempts on Hhat - tau I and Hhat + tau I with
/// tau = sqrt(eps) ||Hhat||: both succeed -> definite, only the second ->
/// borderline, neither -> indefinite.
template <typename Real>
Definiteness definiteness_check(const BseOperator<Real>& op);

/// assemble_h + dense_eig + definiteness_check.
template <typename Real>
DenseEigenDecomposition<Real> dense_solve(const BseOperator<Real>& op);

/// Greedy nearest-value matching: every entry of `approx` is paired with the
/// closest unused entry of `exact`. Returns the index into `exact` per entry,
/// or -1 when the relative gap |a - e| / max(|e|, tiny) exceeds `gate`.
template <typename Real>
std::vector<Index> match_eigenvalues(const RVector<Real>& approx, const CVector<Real>& exact,
                                     Real gate = Real(1e-8));

}  // namespace bse
