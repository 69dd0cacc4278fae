#include "bse/gruning.hpp"

#include "driver.hpp"
#include "pivot.hpp"

namespace bse {

namespace {

/// m -= M c + i N d with c = 2 Re(M'^* m), d = 2 Im(N'^* m) over `cols`
/// M-columns and `cols` N-columns.
template <typename Real>
void orthogonalize_mn(const GruningState<Real>& s, Index cols, CVector<Real>& m) {
  const auto& B = s.basis;
  const Complex<Real> I(0, 1);
  const RVector<Real> c = Real(2) * (B.first_prime.leftCols(cols).adjoint() * m).real();
  m -= B.first.leftCols(cols) * c.template cast<Complex<Real>>();
  if (cols > s.size) cols = s.size;
  const RVector<Real> d = Real(2) * (B.second_prime.leftCols(cols).adjoint() * m).imag();
  m -= I * (B.second.leftCols(cols) * d.template cast<Complex<Real>>());
}

template <typename Real>
void set_m(GruningState<Real>& s, Index j, const CVector<Real>& m,
           const CVector<Real>& mp, Real beta) {
  s.basis.first.col(j) = m / beta;
  s.basis.first_prime.col(j) = mp / beta;
  s.basis.first_cols = j + 1;
}

template <typename Real>
bool random_m(const BseOperator<Real>& op, GruningState<Real>& s, Index j) {
  while (s.consecutive_breakdowns < detail::kMaxBreakdowns) {
    ++s.consecutive_breakdowns;
    ++s.breakdowns;
    CVector<Real> m = random_complex_vector<Real>(s.rng, op.size());
    const Real ref = m.norm();
    orthogonalize_mn(s, j, m);
    orthogonalize_mn(s, j, m);
    const CVector<Real> x = op.apply_plus(m);
    const Real rad = Real(2) * m.dot(x).real();
    if (detail::classify_pivot(rad, m.norm(), ref, Real(2) * m.norm() * x.norm(),
                               "gruning") == detail::Pivot::Ok) {
      set_m(s, j, m, x, std::sqrt(rad));
      return true;
    }
  }
  s.exhausted = true;
  return false;
}

}  // namespace

template <typename Real>
GruningState<Real> gruning_init(const BseOperator<Real>& op, const SolverConfig<Real>& cfg) {
  const Index n = op.size();
  GruningState<Real> s;
  s.k = cfg.ncv;
  s.basis = PairedBasis<Real>(Flavor::MN, n, s.k + 1);
  s.L = RMatrix<Real>::Zero(s.k, s.k);
  s.rng = breakdown_rng(cfg.seed);
  const CVector<Real> m = start_vector(cfg, n);
  if (m.size() != n) throw DimensionMismatch("gruning: start vector length differs from n");
  const CVector<Real> y = op.apply_plus(m);
  const Real rad = Real(2) * m.dot(y).real();
  if (detail::classify_pivot(rad, m.norm(), m.norm(), Real(2) * m.norm() * y.norm(),
                             "gruning") == detail::Pivot::Ok) {
    set_m(s, 0, m, y, std::sqrt(rad));
  } else {
    random_m(op, s, 0);
  }
  return s;
}

template <typename Real>
bool gruning_extend_step(const BseOperator<Real>& op, GruningState<Real>& s) {
  const Index j = s.size;
  if (j >= s.k || s.exhausted) return false;
  auto& B = s.basis;

  // n-step
  CVector<Real> nt = B.first_prime.col(j);
  if (j == s.r) {
    if (s.r > 0) nt -= B.second.leftCols(s.r) * s.b.template cast<Complex<Real>>();
  } else {
    nt -= s.L(j, j - 1) * B.second.col(j - 1);
  }
  const CVector<Real> xn = op.apply_minus(nt);
  const Real rad_n = Real(2) * nt.dot(xn).real();
  if (detail::classify_pivot(rad_n, nt.norm(), B.first_prime.col(j).norm(),
                             Real(2) * nt.norm() * xn.norm(),
                             "gruning") != detail::Pivot::Ok)
    throw IndefiniteProblem("gruning: vanishing pivot of L, the problem is not definite");
  const Real bn = std::sqrt(rad_n);
  s.L(j, j) = bn;
  B.second.col(j) = nt / bn;
  B.second_prime.col(j) = xn / bn;
  B.second_cols = j + 1;
  s.size = j + 1;

  // m-step
  CVector<Real> mt = B.second_prime.col(j) - bn * B.first.col(j);
  const Real ref = B.second_prime.col(j).norm();
  orthogonalize_mn(s, j + 1, mt);
  const CVector<Real> xm = op.apply_plus(mt);
  const Real rad_m = Real(2) * mt.dot(xm).real();
  Real beta = 0;
  if (detail::classify_pivot(rad_m, mt.norm(), ref, Real(2) * mt.norm() * xm.norm(),
                             "gruning") == detail::Pivot::Ok) {
    beta = std::sqrt(rad_m);
    set_m(s, j + 1, mt, xm, beta);
    s.consecutive_breakdowns = 0;
  } else if (j + 1 < s.k) {
    if (!random_m(op, s, j + 1)) return false;
  } else {
    B.first.col(j + 1).setZero();
    B.first_prime.col(j + 1).setZero();
    B.first_cols = j + 2;
  }
  if (j + 1 < s.k) {
    s.L(j + 1, j) = beta;
  } else {
    s.beta_last = beta;
  }
  return s.size < s.k;
}

template <typename Real>
void gruning_extend(const BseOperator<Real>& op, GruningState<Real>& s) {
  while (gruning_extend_step(op, s)) {
  }
}

template <typename Real>
void gruning_restart(GruningState<Real>& s, Index r, Which which) {
  const Index m = s.size;
  r = std::min(r, m);
  const auto f = dense_svd<Real>(s.L.topLeftCorner(m, m), order_for(which));
  const CMatrix<Real> Q = f.left.leftCols(r).template cast<Complex<Real>>();
  const CMatrix<Real> P = f.right.leftCols(r).template cast<Complex<Real>>();
  auto& B = s.basis;
  const CMatrix<Real> Mr = B.first.leftCols(m) * Q;
  const CMatrix<Real> Mpr = B.first_prime.leftCols(m) * Q;
  const CMatrix<Real> Nr = B.second.leftCols(m) * P;
  const CMatrix<Real> Npr = B.second_prime.leftCols(m) * P;
  const Real beta = m == s.k ? s.beta_last : Real(0);
  if (r < m) {
    B.first.col(r) = B.first.col(m);
    B.first_prime.col(r) = B.first_prime.col(m);
  }
  B.first.leftCols(r) = Mr;
  B.first_prime.leftCols(r) = Mpr;
  B.second.leftCols(r) = Nr;
  B.second_prime.leftCols(r) = Npr;
  s.b = beta * f.right.row(m - 1).head(r).transpose();
  s.ritz = f.values.head(r);
  s.L.setZero();
  for (Index i = 0; i < r; ++i) {
    s.L(i, i) = f.values(i);
    if (r < s.k) s.L(r, i) = s.b(i);
  }
  if (r == s.k) s.beta_last = beta;
  s.r = r;
  s.size = r;
  B.first_cols = std::min(r + 1, m + 1);
  B.second_cols = r;
}

template <typename Real>
Index gruning_check_convergence(const GruningState<Real>& s, const SolverConfig<Real>& cfg) {
  return count_converged<Real>(s.b.cwiseAbs(), s.ritz, cfg.tol, cfg.criterion);
}

template <typename Real>
EigResult<Real> gruning_extract(const GruningState<Real>& s, Index pairs) {
  const Index m = std::min(pairs, s.r);
  const auto Mh = s.basis.first.leftCols(m);
  const auto Nh = s.basis.second.leftCols(m);
  const Real h = Real(1) / std::sqrt(Real(2));
  EigResult<Real> res;
  res.solver = "gruning";
  res.couplings = s.b.head(m).cwiseAbs();
  res.residual_estimates = s.basis.first.col(s.r).norm() * s.b.head(m).cwiseAbs();
  set_eigenvectors<Real>(res, s.ritz.head(m), h * (Mh + Nh), h * (Mh - Nh).conjugate());
  return res;
}

template <typename Real>
EigResult<Real> gruning_solve(const BseOperator<Real>& op, const SolverConfig<Real>& cfg,
                              const ProgressFn& progress) {
  validate(cfg, op.size());
  GruningState<Real> s = gruning_init(op, cfg);
  return detail::run_restarted<Real>(
      op, cfg, progress, s, gruning_extend<Real>, gruning_restart<Real>,
      gruning_check_convergence<Real>, gruning_extract<Real>,
      [](const GruningState<Real>& st, Index i) { return std::abs(st.b(i)); });
}

#define BSE_INSTANTIATE(Real)                                                          \
  template struct GruningState<Real>;                                                  \
  template GruningState<Real> gruning_init<Real>(const BseOperator<Real>&,             \
                                                 const SolverConfig<Real>&);           \
  template bool gruning_extend_step<Real>(const BseOperator<Real>&, GruningState<Real>&); \
  template void gruning_extend<Real>(const BseOperator<Real>&, GruningState<Real>&);   \
  template void gruning_restart<Real>(GruningState<Real>&, Index, Which);              \
  template Index gruning_check_convergence<Real>(const GruningState<Real>&,            \
                                                 const SolverConfig<Real>&);           \
  template EigResult<Real> gruning_extract<Real>(const GruningState<Real>&, Index);    \
  template EigResult<Real> gruning_solve<Real>(const BseOperator<Real>&,               \
                                               const SolverConfig<Real>&, const ProgressFn&);

BSE_INSTANTIATE(float)
BSE_INSTANTIATE(double)

}  // namespace bse
