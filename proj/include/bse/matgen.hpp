#pragma once

#include <cstdint>

#include "bse/operator.hpp"

namespace bse {

/// R = pentadiag(a, b, c, conj(b), conj(a)) and C = tridiag(b, d, b): the
/// subdiagonals of R hold a (second) and b (first), the superdiagonals their
/// conjugates.
struct PentadiagSpec {
  Index n = 0;
  std::complex<double> a{-0.1, 0.2};
  std::complex<double> b{1.0, 0.5};
  std::complex<double> c{4.5, 0.0};
  std::complex<double> d{2.0, 0.2};
};

/// Sparse pentadiagonal operator. Throws InvalidConfig if n < 3 or c is not
/// real.
template <typename Real>
BseOperator<Real> gen_pentadiag(const PentadiagSpec& spec);

/// Seeded dense definite instance: R = A A^* / n + delta I with A uniform
/// complex and delta making R strictly diagonally dominant; C = (B + B^T)/2
/// scaled so that ||C||_2 = margin * lambda_min(R). Since
/// Hhat >= (lambda_min(R) - ||C||_2) I, margin < 1 gives a definite instance.
/// Margins above 1 are allowed for negative controls.
template <typename Real>
BseOperator<Real> gen_random_definite(Index n, std::uint64_t seed, double margin = 0.5);

}  // namespace bse
