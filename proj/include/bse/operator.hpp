#pragma once

#include <utility>
#include <variant>

#include "bse/types.hpp"

namespace bse {

/// Explicit storage for one n×n block, dense or sparse.
template <typename Real>
using Block = std::variant<CMatrix<Real>, CSparse<Real>>;

/// The Bethe-Salpeter Hamiltonian
///
///     H = [  R        C      ]
///         [ -conj(C) -conj(R) ]
///
/// held through its two upper blocks. R must be Hermitian and C complex
/// symmetric; both properties are checked on construction. H itself, the
/// sign-stripped matrix and the signature matrix are never formed.
///
/// All member functions are const and safe for concurrent use.
template <typename Real>
class BseOperator {
 public:
  using Vector = CVector<Real>;

  /// `tolerance` bounds the accepted max-entry deviation of R - R^* and
  /// C - C^T. The default of zero demands exact representation.
  BseOperator(Block<Real> r, Block<Real> c, Real tolerance = Real(0));

  Index size() const { return n_; }
  const Block<Real>& r() const { return r_; }
  const Block<Real>& c() const { return c_; }
  bool is_sparse() const { return std::holds_alternative<CSparse<Real>>(r_); }

  /// R u + C conj(u): the top half of H [u; conj(u)].
  Vector apply_plus(const Vector& u) const;
  /// R v - C conj(v): the top half of H [v; -conj(v)].
  Vector apply_minus(const Vector& v) const;

  Vector mul_r(const Vector& x) const;
  Vector mul_c(const Vector& x) const;

  /// H [x1; x2] for an arbitrary (unstructured) 2n-vector.
  std::pair<Vector, Vector> apply_h(const Vector& x1, const Vector& x2) const;
  /// H^* [y1; y2].
  std::pair<Vector, Vector> apply_h_adjoint(const Vector& y1,
                                            const Vector& y2) const;

  /// Upper bound on the 2-norm of H: the largest absolute row sum of [R C].
  Real norm_bound() const;

 private:
  Block<Real> r_;
  Block<Real> c_;
  Index n_ = 0;
};

/// Max-entry deviation of a block from its conjugate transpose
/// (`conjugate == true`) or its plain transpose.
template <typename Real>
Real block_asymmetry(const Block<Real>& block, bool conjugate);

template <typename Real>
Index block_rows(const Block<Real>& block);

template <typename Real>
CMatrix<Real> block_to_dense(const Block<Real>& block);

extern template class BseOperator<float>;
extern template class BseOperator<double>;

}  // namespace bse
