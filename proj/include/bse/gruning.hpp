#pragma once

#include "bse/basis.hpp"
#include "bse/config.hpp"
#include "bse/eig_result.hpp"
#include "bse/operator.hpp"
#include "bse/rng.hpp"

namespace bse {

/// Decomposition
///
///     H [M_j N_j; conj(M_j) -conj(N_j)]
///       = [M_j N_j; conj(M_j) -conj(N_j)] [0 L_j; L_j^T 0]
///         + beta [m_{j+1}; conj(m_{j+1})] e_{2j}^T
///
/// with L lower bidiagonal before the first restart. M (first) and its
/// companion M' = R M + C conj(M) hold size+1 live columns, N (second) and
/// N' = R N - C conj(N) hold size. After a thick restart L is diagonal in its
/// leading r x r block and row r carries the coupling b.
template <typename Real>
struct GruningState {
  PairedBasis<Real> basis;
  RMatrix<Real> L;      // k x k, live block size x size
  RVector<Real> b;      // restart coupling, r entries
  RVector<Real> ritz;   // singular values of L kept by the last restart
  Real beta_last = 0;   // coupling of m_{size+1} once size == k
  Index k = 0;
  Index r = 0;
  Index size = 0;
  Index nconv = 0;
  Index breakdowns = 0;
  Index consecutive_breakdowns = 0;
  bool exhausted = false;
  Rng rng;
};

/// Normalized start vector m = s / beta_0 with beta_0 = sqrt(2 Re(s^* (R s + C conj(s)))).
template <typename Real>
GruningState<Real> gruning_init(const BseOperator<Real>& op, const SolverConfig<Real>& cfg);

/// One n-step and one m-step; returns false once the basis is full or exhausted.
template <typename Real>
bool gruning_extend_step(const BseOperator<Real>& op, GruningState<Real>& state);

template <typename Real>
void gruning_extend(const BseOperator<Real>& op, GruningState<Real>& state);

/// Rotates M, M' by the left and N, N' by the right singular vectors of L,
/// wanted end first, and keeps r of them plus the carried m, m'.
template <typename Real>
void gruning_restart(GruningState<Real>& state, Index r, Which which);

template <typename Real>
Index gruning_check_convergence(const GruningState<Real>& state,
                                const SolverConfig<Real>& cfg);

template <typename Real>
EigResult<Real> gruning_extract(const GruningState<Real>& state, Index pairs);

template <typename Real>
EigResult<Real> gruning_solve(const BseOperator<Real>& op, const SolverConfig<Real>& cfg,
                              const ProgressFn& progress = {});

}  // namespace bse
