#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "bse/small_linalg.hpp"
#include "bse/types.hpp"

namespace bse {

enum class Which { Smallest, Largest };
enum class Criterion { Relative, Absolute };

inline Order order_for(Which which) {
  return which == Which::Smallest ? Order::SmallestFirst : Order::LargestFirst;
}

/// Default seed of the start-vector generator.
inline constexpr std::uint64_t kDefaultSeed = 20250101;

/// Settings shared by the three structured solvers.
template <typename Real>
struct SolverConfig {
  Index nev = 2;           // eigenvalues wanted, counting both signs; even
  Index ncv = 0;           // basis size k
  Index restart_size = 0;  // r; 0 picks max(k/2, nconv+1)
  Real tol = Real(1e-8);
  Criterion criterion = Criterion::Relative;
  Which which = Which::Smallest;
  Index max_restarts = 10000;
  std::uint64_t seed = kDefaultSeed;
  std::optional<CVector<Real>> initial_vector;  // overrides the seeded start
};

/// Throws InvalidConfig unless nev is even, nev/2 <= k <= n, tol > 0 and an
/// explicit restart size satisfies nev/2 <= r < k.
template <typename Real>
void validate(const SolverConfig<Real>& cfg, Index n);

/// Restart size used for the next truncation.
template <typename Real>
Index effective_restart_size(const SolverConfig<Real>& cfg, Index nconv) {
  const Index k = cfg.ncv;
  Index r = cfg.restart_size > 0 ? cfg.restart_size : k / 2;
  r = std::min(std::max(r, nconv + 1), k - 1);
  return std::max(r, cfg.nev / 2);
}

enum class Status { Converged, NotConverged, BreakdownExhausted };

std::string to_string(Status s);

/// Emitted once per restart by the solver drivers.
struct ProgressRecord {
  Index restart = 0;
  Index nconv = 0;
  double b_head = 0;  // |b| of the first unconverged wanted pair
};

using ProgressFn = std::function<void(const ProgressRecord&)>;

/// Counts leading Ritz pairs whose coupling passes the convergence test,
/// stopping at the first failure.
template <typename Real>
Index count_converged(const RVector<Real>& coupling_abs,
                      const RVector<Real>& ritz, Real tol, Criterion criterion) {
  Index n = 0;
  for (; n < coupling_abs.size(); ++n) {
    const Real bound =
        criterion == Criterion::Relative ? tol * std::abs(ritz(n)) : tol;
    if (!(coupling_abs(n) < bound)) break;
  }
  return n;
}

}  // namespace bse
