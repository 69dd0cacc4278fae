#pragma once

#include "bse/basis.hpp"
#include "bse/config.hpp"
#include "bse/eig_result.hpp"
#include "bse/operator.hpp"
#include "bse/rng.hpp"

namespace bse {

/// Lanczos-type decomposition
///
///     H [U_j V_j; conj(U_j) -conj(V_j)]
///       = [U_j V_j; conj(U_j) -conj(V_j)] [0 T_j; I 0]
///         + beta [u_{j+1}; conj(u_{j+1})] e_{2j}^T
///
/// held as n-vector blocks U (first) and V (second) with capacity k+1. After a
/// thick restart the leading r x r block of T is diagonal and row/column r
/// carries the coupling b.
template <typename Real>
struct ShaoState {
  PairedBasis<Real> basis;
  RMatrix<Real> T;      // k x k, live block size x size
  RVector<Real> b;      // restart coupling, r entries
  RVector<Real> ritz;   // eigenvalues of T kept by the last restart (lambda^2)
  Real beta_last = 0;   // coupling of column `size` once size == k
  Index k = 0;
  Index r = 0;
  Index size = 0;       // completed extension steps
  Index nconv = 0;
  Index breakdowns = 0;
  Index consecutive_breakdowns = 0;
  bool exhausted = false;
  Rng rng;
};

/// Normalized start pair: u = s / beta_0, v = (R s + C conj(s)) / beta_0.
template <typename Real>
ShaoState<Real> shao_init(const BseOperator<Real>& op, const SolverConfig<Real>& cfg);

/// One extension step; returns false once the basis is full or exhausted.
template <typename Real>
bool shao_extend_step(const BseOperator<Real>& op, ShaoState<Real>& state);

/// Extends the decomposition to k steps.
template <typename Real>
void shao_extend(const BseOperator<Real>& op, ShaoState<Real>& state);

/// Rotates onto the eigenvectors of T, wanted end first, and keeps r of them
/// together with the carried vector pair.
template <typename Real>
void shao_restart(ShaoState<Real>& state, Index r, Which which);

/// Leading count of kept Ritz pairs with |b_i| below the tolerance.
template <typename Real>
Index shao_check_convergence(const ShaoState<Real>& state, const SolverConfig<Real>& cfg);

/// Eigentriplets for the first `pairs` kept Ritz values.
template <typename Real>
EigResult<Real> shao_extract(const ShaoState<Real>& state, Index pairs);

/// Restarted solver: extend, restart, check until nev/2 pairs converge.
template <typename Real>
EigResult<Real> shao_solve(const BseOperator<Real>& op, const SolverConfig<Real>& cfg,
                           const ProgressFn& progress = {});

}  // namespace bse
