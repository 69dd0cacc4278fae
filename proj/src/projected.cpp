#include "bse/projected.hpp"

#include "driver.hpp"
#include "pivot.hpp"

namespace bse {

namespace {

/// u -= W c + conj(Z c) with c = W^* u - Z^* conj(u) over `cols` columns.
/// Returns c.
template <typename Real>
CVector<Real> orthogonalize_wz(const ProjectedState<Real>& s, Index cols, CVector<Real>& u) {
  const auto W = s.basis.first.leftCols(cols);
  const auto Z = s.basis.second.leftCols(cols);
  const CVector<Real> c = W.adjoint() * u - Z.adjoint() * u.conjugate();
  u -= W * c + (Z * c).conjugate();
  return c;
}

/// Turns the candidate u = beta/2 u_{j+1} and v = R u + C conj(u) into
/// w_{j+1}, z_{j+1}.
template <typename Real>
void set_wz(ProjectedState<Real>& s, Index j, const CVector<Real>& u,
            const CVector<Real>& v, Real beta) {
  const CVector<Real> un = (Real(2) / beta) * u;
  const CVector<Real> vn = (Real(2) / beta) * v;
  s.basis.first.col(j) = (un + vn) / Real(2);
  s.basis.second.col(j) = (un - vn).conjugate() / Real(2);
  s.basis.first_cols = s.basis.second_cols = j + 1;
}

template <typename Real>
bool random_wz(const BseOperator<Real>& op, ProjectedState<Real>& s, Index j) {
  while (s.consecutive_breakdowns < detail::kMaxBreakdowns) {
    ++s.consecutive_breakdowns;
    ++s.breakdowns;
    CVector<Real> u = random_complex_vector<Real>(s.rng, op.size());
    const Real ref = u.norm();
    orthogonalize_wz(s, j, u);
    orthogonalize_wz(s, j, u);
    const CVector<Real> v = op.apply_plus(u);
    const Real rad = u.dot(v).real();
    if (detail::classify_pivot(rad, u.norm(), ref, u.norm() * v.norm(), "projectedbse") ==
        detail::Pivot::Ok) {
      set_wz(s, j, u, v, Real(2) * std::sqrt(rad));
      return true;
    }
  }
  s.exhausted = true;
  return false;
}

}  // namespace

template <typename Real>
ProjectedState<Real> projected_init(const BseOperator<Real>& op,
                                    const SolverConfig<Real>& cfg) {
  const Index n = op.size();
  ProjectedState<Real> s;
  s.k = cfg.ncv;
  s.basis = PairedBasis<Real>(Flavor::WZ, n, s.k + 1);
  s.T = RMatrix<Real>::Zero(s.k, s.k);
  s.rng = breakdown_rng(cfg.seed);
  const CVector<Real> u = start_vector(cfg, n);
  if (u.size() != n)
    throw DimensionMismatch("projectedbse: start vector length differs from n");
  const CVector<Real> v = op.apply_plus(u);
  const Real rad = u.dot(v).real();
  if (detail::classify_pivot(rad, u.norm(), u.norm(), u.norm() * v.norm(), "projectedbse") ==
      detail::Pivot::Ok) {
    set_wz(s, 0, u, v, Real(2) * std::sqrt(rad));
  } else {
    random_wz(op, s, 0);
  }
  return s;
}

template <typename Real>
bool projected_extend_step(const BseOperator<Real>& op, ProjectedState<Real>& s) {
  const Index j = s.size;
  if (j >= s.k || s.exhausted) return false;
  auto& W = s.basis.first;
  auto& Z = s.basis.second;
  const CVector<Real> v = W.col(j) - Z.col(j).conjugate();
  const CVector<Real> vp = op.apply_minus(v);
  const CVector<Real> wp = (vp + v) / Real(2);
  const CVector<Real> zp = (vp - v).conjugate() / Real(2);
  const Real a_t = (W.col(j).dot(wp) - Z.col(j).dot(zp)).real();
  CVector<Real> u = wp - a_t * W.col(j) - (a_t - Real(1)) * Z.col(j).conjugate();
  if (j == s.r) {
    if (s.r > 0) {
      const CVector<Real> bc = s.b.template cast<Complex<Real>>();
      u -= W.leftCols(s.r) * bc + Z.leftCols(s.r).conjugate() * bc;
    }
  } else {
    u -= (s.T(j - 1, j) / Real(2)) * (W.col(j - 1) + Z.col(j - 1).conjugate());
  }
  const Real ref = wp.norm();
  const CVector<Real> c = orthogonalize_wz(s, j + 1, u);
  const Real a = a_t + c(j).real();
  s.T(j, j) = Real(2) * a - Real(1);
  s.size = j + 1;

  const CVector<Real> vt = op.apply_plus(u);
  const Real rad = u.dot(vt).real();
  Real beta = 0;
  if (detail::classify_pivot(rad, u.norm(), ref, u.norm() * vt.norm(), "projectedbse") ==
      detail::Pivot::Ok) {
    beta = Real(2) * std::sqrt(rad);
    set_wz(s, j + 1, u, vt, beta);
    s.consecutive_breakdowns = 0;
  } else if (j + 1 < s.k) {
    if (!random_wz(op, s, j + 1)) return false;
  } else {
    W.col(j + 1).setZero();
    Z.col(j + 1).setZero();
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
void projected_extend(const BseOperator<Real>& op, ProjectedState<Real>& s) {
  while (projected_extend_step(op, s)) {
  }
}

template <typename Real>
void projected_restart(ProjectedState<Real>& s, Index r, Which which) {
  const Index m = s.size;
  r = std::min(r, m);
  const auto f = sym_eig<Real>(s.T.topLeftCorner(m, m), order_for(which));
  detail::require_nonnegative(f.values, "projectedbse");
  const CMatrix<Real> Q = f.vectors.leftCols(r).template cast<Complex<Real>>();
  auto& W = s.basis.first;
  auto& Z = s.basis.second;
  const CMatrix<Real> Wr = W.leftCols(m) * Q;
  const CMatrix<Real> Zr = Z.leftCols(m) * Q;
  const Real beta = m == s.k ? s.beta_last : Real(0);
  if (r < m) {
    W.col(r) = W.col(m);
    Z.col(r) = Z.col(m);
  }
  W.leftCols(r) = Wr;
  Z.leftCols(r) = Zr;
  s.b = (beta / Real(2)) * f.vectors.row(m - 1).head(r).transpose();
  s.ritz = f.values.head(r);
  s.T.setZero();
  for (Index i = 0; i < r; ++i) {
    s.T(i, i) = f.values(i);
    if (r < s.k) s.T(i, r) = s.T(r, i) = Real(2) * s.b(i);
  }
  if (r == s.k) s.beta_last = beta;
  s.r = r;
  s.size = r;
  s.basis.first_cols = s.basis.second_cols = std::min(r + 1, m + 1);
}

template <typename Real>
Index projected_check_convergence(const ProjectedState<Real>& s,
                                  const SolverConfig<Real>& cfg) {
  return count_converged<Real>(Real(2) * s.b.cwiseAbs(), detail::safe_sqrt(s.ritz), cfg.tol,
                               cfg.criterion);
}

template <typename Real>
EigResult<Real> projected_extract(const ProjectedState<Real>& s, Index pairs) {
  const Index m = std::min(pairs, s.r);
  const RVector<Real> lambda = detail::safe_sqrt<Real>(s.ritz.head(m));
  const auto Wt = s.basis.first.leftCols(m);
  const auto Zt = s.basis.second.leftCols(m);
  const auto plus = (lambda.array() + Real(1)).matrix().template cast<Complex<Real>>().asDiagonal();
  const auto minus = (lambda.array() - Real(1)).matrix().template cast<Complex<Real>>().asDiagonal();
  CMatrix<Real> X1 = Wt * plus;
  X1 += Zt.conjugate() * minus;
  CMatrix<Real> X2 = Zt * plus;
  X2 += Wt.conjugate() * minus;
  EigResult<Real> res;
  res.solver = "projectedbse";
  const CVector<Real> u = s.basis.first.col(s.r) + s.basis.second.col(s.r).conjugate();
  res.couplings = Real(2) * s.b.head(m).cwiseAbs();
  res.residual_estimates = std::sqrt(Real(2)) * u.norm() * Real(2) * s.b.head(m).cwiseAbs();
  set_eigenvectors<Real>(res, lambda, std::move(X1), std::move(X2));
  return res;
}

template <typename Real>
EigResult<Real> projected_solve(const BseOperator<Real>& op, const SolverConfig<Real>& cfg,
                                const ProgressFn& progress) {
  validate(cfg, op.size());
  ProjectedState<Real> s = projected_init(op, cfg);
  return detail::run_restarted<Real>(
      op, cfg, progress, s, projected_extend<Real>, projected_restart<Real>,
      projected_check_convergence<Real>, projected_extract<Real>,
      [](const ProjectedState<Real>& st, Index i) { return Real(2) * std::abs(st.b(i)); });
}

#define BSE_INSTANTIATE(Real)                                                              \
  template struct ProjectedState<Real>;                                                    \
  template ProjectedState<Real> projected_init<Real>(const BseOperator<Real>&,             \
                                                     const SolverConfig<Real>&);           \
  template bool projected_extend_step<Real>(const BseOperator<Real>&, ProjectedState<Real>&); \
  template void projected_extend<Real>(const BseOperator<Real>&, ProjectedState<Real>&);   \
  template void projected_restart<Real>(ProjectedState<Real>&, Index, Which);              \
  template Index projected_check_convergence<Real>(const ProjectedState<Real>&,            \
                                                   const SolverConfig<Real>&);             \
  template EigResult<Real> projected_extract<Real>(const ProjectedState<Real>&, Index);    \
  template EigResult<Real> projected_solve<Real>(const BseOperator<Real>&,                 \
                                                 const SolverConfig<Real>&, const ProgressFn&);

BSE_INSTANTIATE(float)
BSE_INSTANTIATE(double)

}  // namespace bse
