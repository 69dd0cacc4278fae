#pragma once

#include "bse/basis.hpp"
#include "bse/config.hpp"
#include "bse/eig_result.hpp"
#include "bse/operator.hpp"
#include "bse/rng.hpp"

namespace bse {

/// Decomposition
///
///     H [W_j conj(Z_j); Z_j conj(W_j)]
///       = [W_j conj(Z_j); Z_j conj(W_j)] [A_j B_j; -B_j -A_j]
///         + beta/2 [u_{j+1}; conj(u_{j+1})] [e_j^T -e_j^T]
///
/// with A = (I + T)/2, B = (I - T)/2 and u_{j+1} = w_{j+1} + conj(z_{j+1}).
/// W (first) and Z (second) hold size+1 live columns. After a thick restart
/// the leading r x r block of T is diagonal and row/column r carries 2 b, so
/// that the first extension subtracts W_r b + conj(Z_r) b.
template <typename Real>
struct ProjectedState {
  PairedBasis<Real> basis;
  RMatrix<Real> T;      // k x k, alpha on the diagonal, beta off it
  RVector<Real> b;      // restart coupling, r entries (half the T coupling)
  RVector<Real> ritz;   // eigenvalues of T kept by the last restart
  Real beta_last = 0;
  Index k = 0;
  Index r = 0;
  Index size = 0;
  Index nconv = 0;
  Index breakdowns = 0;
  Index consecutive_breakdowns = 0;
  bool exhausted = false;
  Rng rng;

  /// a_j = (1 + alpha_j) / 2 for the completed steps.
  RVector<Real> a() const {
    return (RVector<Real>::Ones(size) + T.diagonal().head(size)) / Real(2);
  }
};

/// Start pair w = (u + v)/2, z = conj(u - v)/2 from a normalized Shao pair.
template <typename Real>
ProjectedState<Real> projected_init(const BseOperator<Real>& op,
                                    const SolverConfig<Real>& cfg);

template <typename Real>
bool projected_extend_step(const BseOperator<Real>& op, ProjectedState<Real>& state);

template <typename Real>
void projected_extend(const BseOperator<Real>& op, ProjectedState<Real>& state);

/// Rotates W, Z onto the eigenvectors of T, wanted end first, and keeps r of
/// them together with the carried pair.
template <typename Real>
void projected_restart(ProjectedState<Real>& state, Index r, Which which);

/// Uses 2|b_i| against sqrt(d_i).
template <typename Real>
Index projected_check_convergence(const ProjectedState<Real>& state,
                                  const SolverConfig<Real>& cfg);

template <typename Real>
EigResult<Real> projected_extract(const ProjectedState<Real>& state, Index pairs);

template <typename Real>
EigResult<Real> projected_solve(const BseOperator<Real>& op, const SolverConfig<Real>& cfg,
                                const ProgressFn& progress = {});

}  // namespace bse
