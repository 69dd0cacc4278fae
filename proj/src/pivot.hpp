#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "bse/types.hpp"

namespace bse::detail {

enum class Pivot { Ok, Breakdown };

/// Classifies a normalization radicand rad = Re(x^* K x) of a candidate vector
/// x. `norm_new` is ||x||, `norm_ref` the norm of the vector x was obtained
/// from before orthogonalization, `scale` is ||x|| ||K x||.
template <typename Real>
Pivot classify_pivot(Real rad, Real norm_new, Real norm_ref, Real scale,
                     const char* where) {
  const Real eps = std::numeric_limits<Real>::epsilon();
  if (!(norm_new > std::pow(eps, Real(0.7)) * norm_ref)) return Pivot::Breakdown;
  if (rad < -std::sqrt(eps) * scale)
    throw IndefiniteProblem(std::string(where) +
                            ": negative normalization radicand, the problem is not definite");
  if (rad <= eps * scale) return Pivot::Breakdown;
  return Pivot::Ok;
}

/// Rejects a projected spectrum with clearly negative entries.
template <typename Real>
void require_nonnegative(const RVector<Real>& d, const char* where) {
  if (d.size() == 0) return;
  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real tol = std::sqrt(eps) * d.cwiseAbs().maxCoeff();
  if (d.minCoeff() < -tol)
    throw IndefiniteProblem(std::string(where) +
                            ": projected matrix has a negative eigenvalue, the problem is not definite");
}

/// Square roots with round-off negatives clamped to zero.
template <typename Real>
RVector<Real> safe_sqrt(const RVector<Real>& d) {
  return d.cwiseMax(Real(0)).cwiseSqrt();
}

inline constexpr int kMaxBreakdowns = 3;

}  // namespace bse::detail
