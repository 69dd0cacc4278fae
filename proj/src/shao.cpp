#include "bse/shao.hpp"

#include "driver.hpp"
#include "pivot.hpp"

namespace bse {

namespace {

template <typename Real>
void orthogonalize_uv(const ShaoState<Real>& s, Index cols, CVector<Real>& u) {
  const auto& B = s.basis;
  const auto coef = structured_coeffs_uv(B.first, B.second, cols, u);
  const Complex<Real> I(0, 1);
  u -= B.first.leftCols(cols) * coef.c.template cast<Complex<Real>>();
  u -= I * (B.second.leftCols(cols) * coef.d_imag.template cast<Complex<Real>>());
}

/// Stores u/beta, v/beta in column j.
template <typename Real>
void set_pair(ShaoState<Real>& s, Index j, const CVector<Real>& u,
              const CVector<Real>& v, Real beta) {
  s.basis.first.col(j) = u / beta;
  s.basis.second.col(j) = v / beta;
  s.basis.first_cols = s.basis.second_cols = j + 1;
}

/// Fills column j with a fresh random vector structured-orthogonal to the
/// first j columns. Returns false if no usable vector was found.
template <typename Real>
bool random_column(const BseOperator<Real>& op, ShaoState<Real>& s, Index j) {
  while (s.consecutive_breakdowns < detail::kMaxBreakdowns) {
    ++s.consecutive_breakdowns;
    ++s.breakdowns;
    CVector<Real> u = random_complex_vector<Real>(s.rng, op.size());
    const Real ref = u.norm();
    orthogonalize_uv(s, j, u);
    orthogonalize_uv(s, j, u);
    const CVector<Real> v = op.apply_plus(u);
    const Real rad = u.dot(v).real();
    if (detail::classify_pivot(rad, u.norm(), ref, u.norm() * v.norm(), "shao") ==
        detail::Pivot::Ok) {
      set_pair(s, j, u, v, std::sqrt(rad));
      return true;
    }
  }
  s.exhausted = true;
  return false;
}

}  // namespace

template <typename Real>
ShaoState<Real> shao_init(const BseOperator<Real>& op, const SolverConfig<Real>& cfg) {
  const Index n = op.size();
  ShaoState<Real> s;
  s.k = cfg.ncv;
  s.basis = PairedBasis<Real>(Flavor::UV, n, s.k + 1);
  s.T = RMatrix<Real>::Zero(s.k, s.k);
  s.rng = breakdown_rng(cfg.seed);
  const CVector<Real> u = start_vector(cfg, n);
  if (u.size() != n) throw DimensionMismatch("shao: start vector length differs from n");
  const CVector<Real> v = op.apply_plus(u);
  const Real rad = u.dot(v).real();
  if (detail::classify_pivot(rad, u.norm(), u.norm(), u.norm() * v.norm(), "shao") ==
      detail::Pivot::Ok) {
    set_pair(s, 0, u, v, std::sqrt(rad));
  } else {
    random_column(op, s, 0);
  }
  return s;
}

template <typename Real>
bool shao_extend_step(const BseOperator<Real>& op, ShaoState<Real>& s) {
  const Index j = s.size;
  if (j >= s.k || s.exhausted) return false;
  auto& U = s.basis.first;
  auto& V = s.basis.second;
  const CVector<Real> x = op.apply_minus(V.col(j));
  const Real alpha_t = V.col(j).dot(x).real();
  CVector<Real> u = x - alpha_t * U.col(j);
  if (j == s.r) {
    if (s.r > 0) u -= U.leftCols(s.r) * s.b.template cast<Complex<Real>>();
  } else {
    u -= s.T(j - 1, j) * U.col(j - 1);
  }
  const auto coef = structured_coeffs_uv(U, V, j + 1, u);
  const Complex<Real> I(0, 1);
  u -= U.leftCols(j + 1) * coef.c.template cast<Complex<Real>>();
  u -= I * (V.leftCols(j + 1) * coef.d_imag.template cast<Complex<Real>>());
  s.T(j, j) = alpha_t + coef.c(j);
  s.size = j + 1;

  const CVector<Real> v = op.apply_plus(u);
  const Real rad = u.dot(v).real();
  Real beta = 0;
  if (detail::classify_pivot(rad, u.norm(), x.norm(), u.norm() * v.norm(), "shao") ==
      detail::Pivot::Ok) {
    beta = std::sqrt(rad);
    set_pair(s, j + 1, u, v, beta);
    s.consecutive_breakdowns = 0;
  } else if (j + 1 < s.k) {
    if (!random_column(op, s, j + 1)) return false;
  } else {
    s.basis.first.col(j + 1).setZero();
    s.basis.second.col(j + 1).setZero();
    s.basis.first_cols = s.basis.second_cols = j + 2;
  }
  if (j + 1 < s.k) {
    s.T(j, j + 1) = s.T(j + 1, j) = beta;
  } else {
    s.beta_last = beta;
  }
  return s.size < s.k;
}

template <typename Real>
void shao_extend(const BseOperator<Real>& op, ShaoState<Real>& s) {
  while (shao_extend_step(op, s)) {
  }
}

template <typename Real>
void shao_restart(ShaoState<Real>& s, Index r, Which which) {
  const Index m = s.size;
  r = std::min(r, m);
  const auto f = sym_eig<Real>(s.T.topLeftCorner(m, m), order_for(which));
  detail::require_nonnegative(f.values, "shao");
  const CMatrix<Real> Q = f.vectors.leftCols(r).template cast<Complex<Real>>();
  auto& U = s.basis.first;
  auto& V = s.basis.second;
  const CMatrix<Real> Ur = U.leftCols(m) * Q;
  const CMatrix<Real> Vr = V.leftCols(m) * Q;
  // an exhausted run has no valid carried vector
  const Real beta = m == s.k ? s.beta_last : Real(0);
  if (r < m) {
    U.col(r) = U.col(m);
    V.col(r) = V.col(m);
  }
  U.leftCols(r) = Ur;
  V.leftCols(r) = Vr;
  s.b = beta * f.vectors.row(m - 1).head(r).transpose();
  s.ritz = f.values.head(r);
  s.T.setZero();
  for (Index i = 0; i < r; ++i) {
    s.T(i, i) = f.values(i);
    if (r < s.k) s.T(i, r) = s.T(r, i) = s.b(i);
  }
  if (r == s.k) s.beta_last = beta;
  s.r = r;
  s.size = r;
  s.basis.first_cols = s.basis.second_cols = std::min(r + 1, m + 1);
}

template <typename Real>
Index shao_check_convergence(const ShaoState<Real>& s, const SolverConfig<Real>& cfg) {
  return count_converged<Real>(s.b.cwiseAbs(), detail::safe_sqrt(s.ritz), cfg.tol,
                               cfg.criterion);
}

template <typename Real>
EigResult<Real> shao_extract(const ShaoState<Real>& s, Index pairs) {
  const Index m = std::min(pairs, s.r);
  const RVector<Real> lambda = detail::safe_sqrt<Real>(s.ritz.head(m));
  const auto Uh = s.basis.first.leftCols(m);
  const auto Vh = s.basis.second.leftCols(m);
  const CMatrix<Real> Us = Uh * lambda.template cast<Complex<Real>>().asDiagonal();
  EigResult<Real> res;
  res.solver = "shao";
  const Real rho = std::sqrt(Real(2)) * s.basis.first.col(s.r).norm();
  res.couplings = s.b.head(m).cwiseAbs();
  res.residual_estimates = rho * s.b.head(m).cwiseAbs();
  set_eigenvectors<Real>(res, lambda, Us + Vh, (Us - Vh).conjugate());
  return res;
}

template <typename Real>
EigResult<Real> shao_solve(const BseOperator<Real>& op, const SolverConfig<Real>& cfg,
                           const ProgressFn& progress) {
  validate(cfg, op.size());
  ShaoState<Real> s = shao_init(op, cfg);
  return detail::run_restarted<Real>(
      op, cfg, progress, s, shao_extend<Real>, shao_restart<Real>,
      shao_check_convergence<Real>, shao_extract<Real>,
      [](const ShaoState<Real>& st, Index i) { return std::abs(st.b(i)); });
}

#define BSE_INSTANTIATE(Real)                                                        \
  template struct ShaoState<Real>;                                                   \
  template ShaoState<Real> shao_init<Real>(const BseOperator<Real>&,                 \
                                           const SolverConfig<Real>&);               \
  template bool shao_extend_step<Real>(const BseOperator<Real>&, ShaoState<Real>&);  \
  template void shao_extend<Real>(const BseOperator<Real>&, ShaoState<Real>&);       \
  template void shao_restart<Real>(ShaoState<Real>&, Index, Which);                  \
  template Index shao_check_convergence<Real>(const ShaoState<Real>&,                \
                                              const SolverConfig<Real>&);            \
  template EigResult<Real> shao_extract<Real>(const ShaoState<Real>&, Index);        \
  template EigResult<Real> shao_solve<Real>(const BseOperator<Real>&,                \
                                            const SolverConfig<Real>&, const ProgressFn&);

BSE_INSTANTIATE(float)
BSE_INSTANTIATE(double)

}  // namespace bse
