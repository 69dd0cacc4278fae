#include "bse/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>

namespace bse {

std::vector<Index> report_order(const std::vector<double>& values) {
  std::vector<Index> idx(values.size());
  std::iota(idx.begin(), idx.end(), Index(0));
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    const bool pa = values[a] >= 0, pb = values[b] >= 0;
    if (pa != pb) return pa;
    return std::abs(values[a]) < std::abs(values[b]);
  });
  return idx;
}

template <typename Real>
RunReport make_report(const BseOperator<Real>& op, const EigResult<Real>& res,
                      double wall_seconds) {
  RunReport rep;
  rep.solver = res.solver;
  rep.status = to_string(res.status);
  rep.converged = res.status == Status::Converged;
  rep.restarts = res.restarts;
  rep.nconv = res.nconv;
  rep.breakdowns = res.breakdowns;
  rep.wall_seconds = wall_seconds;
  const Index m = res.pairs();
  if (m == 0) return rep;
  const auto tr = triplet_residuals(op, res);
  const RVector<Real> signed_values = signed_eigenvalues(res);
  std::vector<double> values(signed_values.data(), signed_values.data() + 2 * m);
  rep.order = report_order(values);
  for (Index col : rep.order) {
    const Index i = col % m;
    PairRecord p;
    p.lambda = values[col];
    p.coupling = res.couplings.size() > i ? double(res.couplings(i)) : 0.0;
    p.residual_estimate = double(res.residual_estimates(i)) / double(res.vector_norms(i));
    p.right_residual = tr.right(col);
    p.left_residual = tr.left(col);
    rep.max_rel_residual =
        std::max(rep.max_rel_residual,
                 std::max(p.right_residual, p.left_residual) / std::abs(p.lambda));
    rep.pairs.push_back(p);
  }
  rep.biorthogonality = biorthogonality(res);
  return rep;
}

template <typename Real>
RunReport make_dense_report(const DenseEigenDecomposition<Real>& dec,
                            const BseOperator<Real>& op, double wall_seconds) {
  RunReport rep;
  rep.solver = "dense";
  rep.status = "converged";
  rep.converged = true;
  rep.wall_seconds = wall_seconds;
  rep.definiteness = to_string(dec.definiteness);
  const Index n = op.size();
  std::vector<double> values(dec.values.size());
  for (Index i = 0; i < dec.values.size(); ++i) values[i] = dec.values(i).real();
  rep.order = report_order(values);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (Index col : rep.order) {
    const CVector<Real> x = dec.right_vectors.col(col);
    const CVector<Real> x1 = x.head(n), x2 = x.tail(n);
    auto [h1, h2] = op.apply_h(x1, x2);
    const Complex<Real> l = dec.values(col);
    PairRecord p;
    p.lambda = l.real();
    p.lambda_imag = l.imag();
    p.coupling = nan;
    p.right_residual = std::sqrt(double((h1 - l * x1).squaredNorm() + (h2 - l * x2).squaredNorm()));
    p.residual_estimate = p.right_residual;
    p.left_residual = nan;
    rep.max_rel_residual = std::max(rep.max_rel_residual, p.right_residual / std::abs(l));
    rep.pairs.push_back(p);
  }
  rep.biorthogonality = nan;
  return rep;
}

void write_report(std::ostream& out, const RunReport& rep, int precision) {
  std::ostream& o = out;
  const auto flags = o.flags();
  const auto prec = o.precision();
  o << std::setprecision(precision);
  o << "schema_version=" << kReportSchemaVersion << '\n';
  o << "solver=" << rep.solver << '\n';
  for (const auto& [k, v] : rep.config) o << "config." << k << '=' << v << '\n';
  o << "status=" << rep.status << '\n';
  o << "converged=" << (rep.converged ? "true" : "false") << '\n';
  o << "restarts=" << rep.restarts << '\n';
  o << "nconv=" << rep.nconv << '\n';
  o << "breakdowns=" << rep.breakdowns << '\n';
  if (!rep.definiteness.empty()) o << "definiteness=" << rep.definiteness << '\n';
  o << "wall_seconds=" << std::setprecision(6) << rep.wall_seconds << std::setprecision(precision)
    << '\n';
  o << std::scientific;
  o << "max_rel_residual=" << rep.max_rel_residual << '\n';
  o << "biorthogonality=" << rep.biorthogonality << '\n';
  o << "pair_count=" << rep.pairs.size() << '\n';
  o << "pair_columns=lambda lambda_imag coupling residual_estimate right_residual left_residual\n";
  for (const auto& p : rep.pairs) {
    o << "pair=" << p.lambda << ' ' << p.lambda_imag << ' ' << p.coupling << ' '
      << p.residual_estimate << ' ' << p.right_residual << ' ' << p.left_residual << '\n';
  }
  o.flags(flags);
  o.precision(prec);
}

#define BSE_INSTANTIATE(Real)                                                           \
  template RunReport make_report<Real>(const BseOperator<Real>&, const EigResult<Real>&, \
                                       double);                                         \
  template RunReport make_dense_report<Real>(const DenseEigenDecomposition<Real>&,      \
                                             const BseOperator<Real>&, double);

BSE_INSTANTIATE(float)
BSE_INSTANTIATE(double)

}  // namespace bse
