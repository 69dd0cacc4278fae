#include "bse/operator.hpp"

#include <sstream>

namespace bse {

namespace {

template <typename Real, typename Vec>
CVector<Real> times(const Block<Real>& block, const Vec& x) {
  return std::visit([&](const auto& m) -> CVector<Real> { return m * x; },
                    block);
}

template <typename Real>
RVector<Real> abs_row_sums(const Block<Real>& block) {
  if (const auto* dense = std::get_if<CMatrix<Real>>(&block))
    return dense->cwiseAbs().rowwise().sum();
  const auto& sparse = std::get<CSparse<Real>>(block);
  RVector<Real> sums = RVector<Real>::Zero(sparse.rows());
  for (Index k = 0; k < sparse.outerSize(); ++k)
    for (typename CSparse<Real>::InnerIterator it(sparse, k); it; ++it)
      sums(it.row()) += std::abs(it.value());
  return sums;
}

}  // namespace

template <typename Real>
Index block_rows(const Block<Real>& block) {
  return std::visit([](const auto& m) { return Index(m.rows()); }, block);
}

template <typename Real>
CMatrix<Real> block_to_dense(const Block<Real>& block) {
  return std::visit(
      [](const auto& m) -> CMatrix<Real> { return CMatrix<Real>(m); }, block);
}

template <typename Real>
Real block_asymmetry(const Block<Real>& block, bool conjugate) {
  if (const auto* dense = std::get_if<CMatrix<Real>>(&block)) {
    if (conjugate) return (*dense - dense->adjoint()).cwiseAbs().maxCoeff();
    return (*dense - dense->transpose()).cwiseAbs().maxCoeff();
  }
  const auto& sparse = std::get<CSparse<Real>>(block);
  CSparse<Real> mirrored =
      conjugate ? CSparse<Real>(sparse.adjoint()) : CSparse<Real>(sparse.transpose());
  CSparse<Real> diff = sparse - mirrored;
  Real worst = 0;
  for (Index k = 0; k < diff.outerSize(); ++k)
    for (typename CSparse<Real>::InnerIterator it(diff, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst;
}

template <typename Real>
BseOperator<Real>::BseOperator(Block<Real> r, Block<Real> c, Real tolerance)
    : r_(std::move(r)), c_(std::move(c)) {
  const Index rr = block_rows(r_);
  const Index cr = block_rows(c_);
  const Index rc = std::visit([](const auto& m) { return Index(m.cols()); }, r_);
  const Index cc = std::visit([](const auto& m) { return Index(m.cols()); }, c_);
  if (rr != rc || cr != cc || rr != cr || rr == 0) {
    std::ostringstream msg;
    msg << "R is " << rr << "x" << rc << " and C is " << cr << "x" << cc
        << "; both must be the same nonempty square size";
    throw DimensionMismatch(msg.str());
  }
  if (r_.index() != c_.index())
    throw DimensionMismatch("R and C must use the same storage kind");
  n_ = rr;
  if (Real dev = block_asymmetry(r_, true); dev > tolerance) {
    std::ostringstream msg;
    msg << "R is not Hermitian: max |R - R^*| = " << dev;
    throw SymmetryViolation(msg.str());
  }
  if (Real dev = block_asymmetry(c_, false); dev > tolerance) {
    std::ostringstream msg;
    msg << "C is not symmetric: max |C - C^T| = " << dev;
    throw SymmetryViolation(msg.str());
  }
}

template <typename Real>
CVector<Real> BseOperator<Real>::apply_plus(const Vector& u) const {
  if (u.size() != n_) throw DimensionMismatch("apply_plus: vector length != n");
  Vector out = times(r_, u);
  out += times(c_, u.conjugate());
  return out;
}

template <typename Real>
CVector<Real> BseOperator<Real>::apply_minus(const Vector& v) const {
  if (v.size() != n_) throw DimensionMismatch("apply_minus: vector length != n");
  Vector out = times(r_, v);
  out -= times(c_, v.conjugate());
  return out;
}

template <typename Real>
CVector<Real> BseOperator<Real>::mul_r(const Vector& x) const {
  if (x.size() != n_) throw DimensionMismatch("mul_r: vector length != n");
  return times(r_, x);
}

template <typename Real>
CVector<Real> BseOperator<Real>::mul_c(const Vector& x) const {
  if (x.size() != n_) throw DimensionMismatch("mul_c: vector length != n");
  return times(c_, x);
}

template <typename Real>
std::pair<CVector<Real>, CVector<Real>> BseOperator<Real>::apply_h(
    const Vector& x1, const Vector& x2) const {
  if (x1.size() != n_ || x2.size() != n_)
    throw DimensionMismatch("apply_h: block length != n");
  // bottom: -conj(C) x1 - conj(R) x2 = -conj(C conj(x1) + R conj(x2))
  Vector top = times(r_, x1) + times(c_, x2);
  Vector bottom = -(times(c_, x1.conjugate()) + times(r_, x2.conjugate())).conjugate();
  return {std::move(top), std::move(bottom)};
}

template <typename Real>
std::pair<CVector<Real>, CVector<Real>> BseOperator<Real>::apply_h_adjoint(
    const Vector& y1, const Vector& y2) const {
  if (y1.size() != n_ || y2.size() != n_)
    throw DimensionMismatch("apply_h_adjoint: block length != n");
  // H^* = [[R, -C], [conj(C), -conj(R)]]
  Vector top = times(r_, y1) - times(c_, y2);
  Vector bottom = (times(c_, y1.conjugate()) - times(r_, y2.conjugate())).conjugate();
  return {std::move(top), std::move(bottom)};
}

template <typename Real>
Real BseOperator<Real>::norm_bound() const {
  // H has equal 1- and inf-norms (R Hermitian, C symmetric), and
  // ||H||_2 <= sqrt(||H||_1 ||H||_inf).
  return (abs_row_sums(r_) + abs_row_sums(c_)).maxCoeff();
}

#define BSE_INSTANTIATE(Real)                                               \
  template class BseOperator<Real>;                                         \
  template Real block_asymmetry<Real>(const Block<Real>&, bool);            \
  template Index block_rows<Real>(const Block<Real>&);                      \
  template CMatrix<Real> block_to_dense<Real>(const Block<Real>&);

BSE_INSTANTIATE(float)
BSE_INSTANTIATE(double)

}  // namespace bse
