#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace bse {

using Index = Eigen::Index;

template <typename Real> using Complex = std::complex<Real>;

template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real> using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
template <typename Real>
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real> using CSparse = Eigen::SparseMatrix<std::complex<Real>>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// The sign-stripped matrix [[R, C], [conj(C), conj(R)]] is not positive
/// definite, detected through a negative normalization radicand or a
/// nonpositive projected eigenvalue.
class IndefiniteProblem : public Error {
 public:
  using Error::Error;
};

/// An iterative dense factorization exceeded its sweep cap.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent matrix file.
class FormatError : public Error {
 public:
  using Error::Error;
};

class SymmetryViolation : public Error {
 public:
  using Error::Error;
};

class SizeGuardExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace bse
