#include "bse/eig_result.hpp"

namespace bse {

std::string to_string(Status s) {
  switch (s) {
    case Status::Converged:
      return "converged";
    case Status::NotConverged:
      return "not-converged";
    case Status::BreakdownExhausted:
      return "breakdown-exhausted";
  }
  return "unknown";
}

template <typename Real>
void validate(const SolverConfig<Real>& cfg, Index n) {
  auto fail = [](const std::string& what) { throw InvalidConfig(what); };
  if (cfg.nev < 2 || cfg.nev % 2 != 0) fail("--nev must be a positive even number");
  if (cfg.ncv < 1) fail("--ncv must be positive");
  if (cfg.ncv > n) fail("--ncv must not exceed the block size n");
  if (!(cfg.tol > Real(0))) fail("--tol must be positive");
  if (cfg.max_restarts < 1) fail("--max-restarts must be positive");
  if (cfg.nev / 2 > cfg.ncv) fail("--nev/2 must not exceed --ncv");
  if (cfg.restart_size > 0 && (cfg.restart_size < cfg.nev / 2 || cfg.restart_size >= cfg.ncv))
    fail("--restart-size must satisfy nev/2 <= r < ncv");
  if (cfg.initial_vector && cfg.initial_vector->size() != n)
    fail("initial vector length must equal n");
}

template <typename Real>
RVector<Real> signed_eigenvalues(const EigResult<Real>& res) {
  const Index m = res.pairs();
  RVector<Real> out(2 * m);
  out.head(m) = res.values;
  out.tail(m) = -res.values;
  return out;
}

template <typename Real>
CMatrix<Real> right_eigenvectors(const EigResult<Real>& res) {
  const Index n = res.x1.rows();
  const Index m = res.pairs();
  CMatrix<Real> X(2 * n, 2 * m);
  X.topLeftCorner(n, m) = res.x1;
  X.bottomLeftCorner(n, m) = res.x2;
  X.topRightCorner(n, m) = res.x2.conjugate();
  X.bottomRightCorner(n, m) = res.x1.conjugate();
  return X;
}

template <typename Real>
CMatrix<Real> left_eigenvectors(const EigResult<Real>& res) {
  const Index n = res.x1.rows();
  const Index m = res.pairs();
  CMatrix<Real> Y(2 * n, 2 * m);
  Y.topLeftCorner(n, m) = res.x1;
  Y.bottomLeftCorner(n, m) = -res.x2;
  Y.topRightCorner(n, m) = -res.x2.conjugate();
  Y.bottomRightCorner(n, m) = res.x1.conjugate();
  return Y;
}

template <typename Real>
TripletResiduals<Real> triplet_residuals(const BseOperator<Real>& op,
                                         const EigResult<Real>& res) {
  const Index n = op.size();
  const Index m = res.pairs();
  const CMatrix<Real> X = right_eigenvectors(res);
  const CMatrix<Real> Y = left_eigenvectors(res);
  const RVector<Real> lambda = signed_eigenvalues(res);
  TripletResiduals<Real> out{RVector<Real>(2 * m), RVector<Real>(2 * m)};
  for (Index i = 0; i < 2 * m; ++i) {
    CVector<Real> x1 = X.col(i).head(n), x2 = X.col(i).tail(n);
    auto [h1, h2] = op.apply_h(x1, x2);
    out.right(i) = std::sqrt((h1 - lambda(i) * x1).squaredNorm() +
                             (h2 - lambda(i) * x2).squaredNorm());
    // y^* H = l y^*  <=>  H^* y = l y  (l real)
    CVector<Real> y1 = Y.col(i).head(n), y2 = Y.col(i).tail(n);
    auto [g1, g2] = op.apply_h_adjoint(y1, y2);
    out.left(i) = std::sqrt((g1 - lambda(i) * y1).squaredNorm() +
                            (g2 - lambda(i) * y2).squaredNorm());
  }
  return out;
}

template <typename Real>
Real max_relative_residual(const BseOperator<Real>& op, const EigResult<Real>& res) {
  const auto r = triplet_residuals(op, res);
  const RVector<Real> lambda = signed_eigenvalues(res);
  Real worst = 0;
  for (Index i = 0; i < lambda.size(); ++i)
    worst = std::max(worst, std::max(r.right(i), r.left(i)) / std::abs(lambda(i)));
  return worst;
}

template <typename Real>
Real biorthogonality(const EigResult<Real>& res) {
  if (res.pairs() == 0) return Real(0);
  CMatrix<Real> G = left_eigenvectors(res).adjoint() * right_eigenvectors(res);
  G.diagonal().setZero();
  return G.cwiseAbs().maxCoeff();
}

template <typename Real>
void set_eigenvectors(EigResult<Real>& res, RVector<Real> values,
                      CMatrix<Real> x1, CMatrix<Real> x2) {
  const Index m = values.size();
  res.vector_norms.resize(m);
  for (Index i = 0; i < m; ++i) {
    const Real norm = std::sqrt(x1.col(i).squaredNorm() + x2.col(i).squaredNorm());
    res.vector_norms(i) = norm;
    if (norm > Real(0)) {
      x1.col(i) /= norm;
      x2.col(i) /= norm;
    }
  }
  res.values = std::move(values);
  res.x1 = std::move(x1);
  res.x2 = std::move(x2);
}

#define BSE_INSTANTIATE(Real)                                                   \
  template void validate<Real>(const SolverConfig<Real>&, Index);               \
  template RVector<Real> signed_eigenvalues<Real>(const EigResult<Real>&);      \
  template CMatrix<Real> right_eigenvectors<Real>(const EigResult<Real>&);      \
  template CMatrix<Real> left_eigenvectors<Real>(const EigResult<Real>&);       \
  template TripletResiduals<Real> triplet_residuals<Real>(                      \
      const BseOperator<Real>&, const EigResult<Real>&);                        \
  template Real max_relative_residual<Real>(const BseOperator<Real>&,           \
                                            const EigResult<Real>&);            \
  template Real biorthogonality<Real>(const EigResult<Real>&);                  \
  template void set_eigenvectors<Real>(EigResult<Real>&, RVector<Real>,         \
                                       CMatrix<Real>, CMatrix<Real>);

BSE_INSTANTIATE(float)
BSE_INSTANTIATE(double)

}  // namespace bse
