#pragma once

#include "bse/config.hpp"
#include "bse/eig_result.hpp"
#include "bse/operator.hpp"

namespace bse::detail {

/// Outer loop shared by the three solvers: extend to k, restart to r, count
/// converged pairs, until nev/2 pairs converge or a stop condition hits.
/// `head` maps a kept index to the quantity compared against the tolerance.
template <typename Real, typename State, typename Extend, typename Restart,
          typename Check, typename Extract, typename Head>
EigResult<Real> run_restarted(const BseOperator<Real>& op, const SolverConfig<Real>& cfg,
                              const ProgressFn& progress, State& s, Extend extend,
                              Restart restart, Check check, Extract extract, Head head) {
  const Index want = cfg.nev / 2;
  Index restarts = 0;
  Status status = Status::NotConverged;
  for (;;) {
    extend(op, s);
    Index r = effective_restart_size(cfg, s.nconv);
    if (s.exhausted) r = std::min(r, s.size);
    restart(s, r, cfg.which);
    ++restarts;
    s.nconv = check(s, cfg);
    if (progress) {
      const Index i = std::min(s.nconv, s.r - 1);
      progress({restarts, s.nconv, i >= 0 ? double(head(s, i)) : 0.0});
    }
    if (s.nconv >= want) {
      status = Status::Converged;
      break;
    }
    if (s.exhausted) {
      status = Status::BreakdownExhausted;
      break;
    }
    if (restarts >= cfg.max_restarts || s.r >= s.k) break;
  }
  EigResult<Real> res = extract(s, want);
  res.restarts = restarts;
  res.nconv = s.nconv;
  res.breakdowns = s.breakdowns;
  res.status = status;
  return res;
}

}  // namespace bse::detail
