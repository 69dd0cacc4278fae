#include "bse/small_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/Householder>

namespace bse {

namespace {

// col_i <- c col_i - s col_j, col_j <- s col_i + c col_j
template <typename Real>
void rotate_cols(RMatrix<Real>& M, Index i, Index j, Real c, Real s, Index lo,
                 Index hi) {
  for (Index row = lo; row <= hi; ++row) {
    const Real a = M(row, i);
    const Real b = M(row, j);
    M(row, i) = c * a - s * b;
    M(row, j) = s * a + c * b;
  }
}

template <typename Real>
void rotate_rows(RMatrix<Real>& M, Index i, Index j, Real c, Real s, Index lo,
                 Index hi) {
  for (Index col = lo; col <= hi; ++col) {
    const Real a = M(i, col);
    const Real b = M(j, col);
    M(i, col) = c * a - s * b;
    M(j, col) = s * a + c * b;
  }
}

// (c, s) with c*y - s*z = r and s*y + c*z = 0
template <typename Real>
std::pair<Real, Real> annihilator(Real y, Real z) {
  const Real r = std::hypot(y, z);
  if (r == Real(0)) return {Real(1), Real(0)};
  return {y / r, -z / r};
}

template <typename Real>
SpectralFactor<Real> sorted(RVector<Real> values, const RMatrix<Real>& vectors,
                            Order order) {
  const auto perm = stable_order(values, order);
  SpectralFactor<Real> out;
  out.values.resize(values.size());
  out.vectors.resize(vectors.rows(), vectors.cols());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    out.values(Index(i)) = values(perm[i]);
    out.vectors.col(Index(i)) = vectors.col(perm[i]);
  }
  return out;
}

// Golub-Kahan SVD of the upper bidiagonal B held densely. On exit B is
// diagonal with nonnegative entries and B_in = U B V^T holds for the
// accumulated U and V (which enter as the current left/right factors).
template <typename Real>
void golub_kahan(RMatrix<Real>& B, RMatrix<Real>& U, RMatrix<Real>& V) {
  const Index k = B.rows();
  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real bnorm = B.cwiseAbs().maxCoeff();
  const Index cap = 75 * std::max<Index>(k, 1);
  Index steps = 0;
  if (bnorm == Real(0)) return;

  while (true) {
    for (Index i = 0; i + 1 < k; ++i) {
      if (std::abs(B(i, i + 1)) <=
          eps * (std::abs(B(i, i)) + std::abs(B(i + 1, i + 1))))
        B(i, i + 1) = 0;
    }
    Index q = k - 1;
    while (q > 0 && B(q - 1, q) == Real(0)) --q;
    if (q == 0) break;
    Index p = q - 1;
    while (p > 0 && B(p - 1, p) != Real(0)) --p;

    // A zero on the diagonal lets the block split after a chase.
    bool split = false;
    for (Index i = p; i <= q; ++i) {
      if (std::abs(B(i, i)) > eps * bnorm) continue;
      B(i, i) = 0;
      if (i < q) {
        for (Index j = i + 1; j <= q; ++j) {
          if (B(i, j) == Real(0)) break;
          auto [c, s] = annihilator(B(j, j), B(i, j));
          rotate_rows(B, j, i, c, s, p, q);
          rotate_cols(U, j, i, c, s, Index(0), U.rows() - 1);
          B(i, j) = 0;
        }
      } else {
        for (Index j = q - 1; j >= p; --j) {
          if (B(j, q) == Real(0)) break;
          auto [c, s] = annihilator(B(j, j), B(j, q));
          rotate_cols(B, j, q, c, s, p, q);
          rotate_cols(V, j, q, c, s, Index(0), V.rows() - 1);
          B(j, q) = 0;
          if (j == 0) break;
        }
      }
      split = true;
      break;
    }
    if (split) continue;

    if (++steps > cap)
      throw NonConvergence("bidiagonal SVD did not converge");

    // Wilkinson shift from the trailing 2x2 block of B^T B.
    const Real dm = B(q - 1, q - 1);
    const Real em = B(q - 1, q);
    const Real dn = B(q, q);
    const Real eprev = q - 1 > p ? B(q - 2, q - 1) : Real(0);
    const Real a1 = dm * dm + eprev * eprev;
    const Real b1 = dm * em;
    const Real a2 = dn * dn + em * em;
    const Real delta = (a1 - a2) / 2;
    const Real root = std::hypot(delta, b1);
    const Real mu = delta == Real(0)
                        ? a2 - std::abs(b1)
                        : a2 - b1 * b1 / (delta + std::copysign(root, delta));

    Real y = B(p, p) * B(p, p) - mu;
    Real z = B(p, p) * B(p, p + 1);
    for (Index j = p; j < q; ++j) {
      auto [c, s] = annihilator(y, z);
      rotate_cols(B, j, j + 1, c, s, p, q);
      rotate_cols(V, j, j + 1, c, s, Index(0), V.rows() - 1);
      if (j > p) B(j - 1, j + 1) = 0;
      y = B(j, j);
      z = B(j + 1, j);
      auto [c2, s2] = annihilator(y, z);
      rotate_rows(B, j, j + 1, c2, s2, p, q);
      rotate_cols(U, j, j + 1, c2, s2, Index(0), U.rows() - 1);
      B(j + 1, j) = 0;
      if (j + 1 < q) {
        y = B(j, j + 1);
        z = B(j, j + 2);
      }
    }
  }
}

template <typename Real>
SvdFactor<Real> finish_svd(RMatrix<Real>& B, RMatrix<Real>& U, RMatrix<Real>& V,
                           Order order) {
  const Index k = B.rows();
  RVector<Real> sigma(k);
  for (Index i = 0; i < k; ++i) {
    sigma(i) = B(i, i);
    if (sigma(i) < Real(0)) {
      sigma(i) = -sigma(i);
      V.col(i) = -V.col(i);
    }
  }
  const auto perm = stable_order(sigma, order);
  SvdFactor<Real> out;
  out.values.resize(k);
  out.left.resize(U.rows(), k);
  out.right.resize(V.rows(), k);
  for (Index i = 0; i < k; ++i) {
    out.values(i) = sigma(perm[std::size_t(i)]);
    out.left.col(i) = U.col(perm[std::size_t(i)]);
    out.right.col(i) = V.col(perm[std::size_t(i)]);
  }
  return out;
}

}  // namespace

template <typename Real>
RMatrix<Real> SymTridiag<Real>::dense() const {
  const Index k = diag.size();
  RMatrix<Real> T = RMatrix<Real>::Zero(k, k);
  T.diagonal() = diag;
  for (Index i = 0; i + 1 < k; ++i) T(i, i + 1) = T(i + 1, i) = offdiag(i);
  return T;
}

template <typename Real>
RMatrix<Real> LowerBidiag<Real>::dense() const {
  const Index k = diag.size();
  RMatrix<Real> L = RMatrix<Real>::Zero(k, k);
  L.diagonal() = diag;
  for (Index i = 0; i + 1 < k; ++i) L(i + 1, i) = subdiag(i);
  return L;
}

template <typename Real>
std::vector<Index> stable_order(const RVector<Real>& values, Order order) {
  std::vector<Index> perm(std::size_t(values.size()));
  std::iota(perm.begin(), perm.end(), Index(0));
  if (order == Order::SmallestFirst)
    std::stable_sort(perm.begin(), perm.end(),
                     [&](Index a, Index b) { return values(a) < values(b); });
  else
    std::stable_sort(perm.begin(), perm.end(),
                     [&](Index a, Index b) { return values(a) > values(b); });
  return perm;
}

template <typename Real>
SpectralFactor<Real> tridiag_eig(const SymTridiag<Real>& T, Order order) {
  const Index k = T.size();
  if (T.offdiag.size() != std::max<Index>(k - 1, 0))
    throw DimensionMismatch("tridiag_eig: offdiag must have k-1 entries");
  const Real eps = std::numeric_limits<Real>::epsilon();
  RVector<Real> d = T.diag;
  RVector<Real> e = RVector<Real>::Zero(k);
  if (k > 1) e.head(k - 1) = T.offdiag;
  RMatrix<Real> Z = RMatrix<Real>::Identity(k, k);

  for (Index l = 0; l < k; ++l) {
    int iter = 0;
    while (true) {
      Index m = l;
      for (; m < k - 1; ++m) {
        const Real dd = std::abs(d(m)) + std::abs(d(m + 1));
        if (std::abs(e(m)) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iter > 60)
        throw NonConvergence("tridiagonal QL iteration did not converge");

      Real g = (d(l + 1) - d(l)) / (Real(2) * e(l));
      Real r = std::hypot(g, Real(1));
      g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
      Real s = 1, c = 1, p = 0;
      bool underflow = false;
      for (Index i = m - 1; i >= l; --i) {
        const Real f = s * e(i);
        const Real b = c * e(i);
        r = std::hypot(f, g);
        e(i + 1) = r;
        if (r == Real(0)) {
          d(i + 1) -= p;
          e(m) = 0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d(i + 1) - p;
        r = (d(i) - g) * s + Real(2) * c * b;
        p = s * r;
        d(i + 1) = g + p;
        g = c * r - b;
        for (Index row = 0; row < k; ++row) {
          const Real zf = Z(row, i + 1);
          Z(row, i + 1) = s * Z(row, i) + c * zf;
          Z(row, i) = c * Z(row, i) - s * zf;
        }
        if (i == 0) break;
      }
      if (underflow) continue;
      d(l) -= p;
      e(l) = g;
      e(m) = 0;
    }
  }
  return sorted(std::move(d), Z, order);
}

template <typename Real>
SpectralFactor<Real> sym_eig(const RMatrix<Real>& A, Order order) {
  const Index k = A.rows();
  if (A.cols() != k) throw DimensionMismatch("sym_eig: matrix must be square");
  if (k <= 2) {
    SymTridiag<Real> T{A.diagonal(), RVector<Real>(std::max<Index>(k - 1, 0))};
    if (k == 2) T.offdiag(0) = A(1, 0);
    return tridiag_eig(T, order);
  }
  Eigen::Tridiagonalization<RMatrix<Real>> tri(A);
  SymTridiag<Real> T{tri.diagonal(), tri.subDiagonal()};
  SpectralFactor<Real> inner = tridiag_eig(T, order);
  RMatrix<Real> Q = tri.matrixQ();
  inner.vectors = Q * inner.vectors;
  return inner;
}

template <typename Real>
SvdFactor<Real> bidiag_svd(const LowerBidiag<Real>& L, Order order) {
  const Index k = L.size();
  if (L.subdiag.size() != std::max<Index>(k - 1, 0))
    throw DimensionMismatch("bidiag_svd: subdiag must have k-1 entries");
  // L^T is upper bidiagonal: L^T = U S V^T  <=>  L = V S U^T.
  RMatrix<Real> B = L.dense().transpose();
  RMatrix<Real> U = RMatrix<Real>::Identity(k, k);
  RMatrix<Real> V = RMatrix<Real>::Identity(k, k);
  golub_kahan(B, U, V);
  SvdFactor<Real> f = finish_svd(B, U, V, order);
  std::swap(f.left, f.right);
  return f;
}

template <typename Real>
SvdFactor<Real> dense_svd(const RMatrix<Real>& A, Order order) {
  const Index k = A.rows();
  if (A.cols() != k) throw DimensionMismatch("dense_svd: matrix must be square");
  RMatrix<Real> B = A;
  RMatrix<Real> U = RMatrix<Real>::Identity(k, k);
  RMatrix<Real> V = RMatrix<Real>::Identity(k, k);
  RVector<Real> work(k);
  for (Index j = 0; j < k; ++j) {
    const Index m = k - j;
    if (m > 1) {
      RVector<Real> essential(m - 1);
      Real tau, beta;
      B.col(j).tail(m).makeHouseholder(essential, tau, beta);
      B.bottomRightCorner(m, m).applyHouseholderOnTheLeft(essential, tau, work.data());
      U.rightCols(m).applyHouseholderOnTheRight(essential, tau, work.data());
    }
    if (m > 2) {
      RVector<Real> essential(m - 2);
      Real tau, beta;
      RVector<Real> row = B.row(j).tail(m - 1).transpose();
      row.makeHouseholder(essential, tau, beta);
      B.bottomRightCorner(m, m - 1).applyHouseholderOnTheRight(essential, tau, work.data());
      V.rightCols(m - 1).applyHouseholderOnTheRight(essential, tau, work.data());
    }
  }
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j)
      if (j != i && j != i + 1) B(i, j) = 0;
  golub_kahan(B, U, V);
  return finish_svd(B, U, V, order);
}

template <typename Real>
Real cholesky_relation_check(const RMatrix<Real>& T, const RMatrix<Real>& L) {
  if (T.rows() != L.rows() || T.cols() != L.cols() || T.rows() != T.cols())
    throw DimensionMismatch("cholesky_relation_check: size mismatch");
  if (T.size() == 0) return Real(0);
  return (T - L * L.transpose()).cwiseAbs().maxCoeff();
}

#define BSE_INSTANTIATE(Real)                                                  \
  template struct SymTridiag<Real>;                                            \
  template struct LowerBidiag<Real>;                                           \
  template SpectralFactor<Real> tridiag_eig<Real>(const SymTridiag<Real>&, Order); \
  template SpectralFactor<Real> sym_eig<Real>(const RMatrix<Real>&, Order);    \
  template SvdFactor<Real> bidiag_svd<Real>(const LowerBidiag<Real>&, Order);  \
  template SvdFactor<Real> dense_svd<Real>(const RMatrix<Real>&, Order);       \
  template Real cholesky_relation_check<Real>(const RMatrix<Real>&,            \
                                              const RMatrix<Real>&);           \
  template std::vector<Index> stable_order<Real>(const RVector<Real>&, Order);

BSE_INSTANTIATE(float)
BSE_INSTANTIATE(double)

}  // namespace bse
