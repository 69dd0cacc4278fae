#pragma once

#include <cstdint>
#include <random>

#include "bse/config.hpp"
#include "bse/types.hpp"

namespace bse {

/// 64-bit Mersenne Twister (std::mt19937_64). Its output sequence is fixed by
/// the C++ standard, so seeded streams are identical on every platform.
using Rng = std::mt19937_64;

/// Uniform double in [-1, 1) from the top 53 bits of one draw. Used instead of
/// std::uniform_real_distribution, whose algorithm is implementation-defined.
inline double uniform_pm1(Rng& rng) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * unit - 1.0;
}

/// n complex entries, real part drawn before imaginary part, both uniform in
/// [-1, 1).
template <typename Real>
CVector<Real> random_complex_vector(Rng& rng, Index n) {
  CVector<Real> v(n);
  for (Index i = 0; i < n; ++i) {
    const double re = uniform_pm1(rng);
    const double im = uniform_pm1(rng);
    v(i) = Complex<Real>(static_cast<Real>(re), static_cast<Real>(im));
  }
  return v;
}

/// The user vector if given, otherwise the first draw of a stream seeded with
/// cfg.seed.
template <typename Real>
CVector<Real> start_vector(const SolverConfig<Real>& cfg, Index n) {
  if (cfg.initial_vector) return *cfg.initial_vector;
  Rng rng(cfg.seed);
  return random_complex_vector<Real>(rng, n);
}

/// Stream for replacement vectors after a breakdown, independent of the start
/// vector stream.
inline Rng breakdown_rng(std::uint64_t seed) {
  return Rng(seed ^ 0x9e3779b97f4a7c15ULL);
}

}  // namespace bse
