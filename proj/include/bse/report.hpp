#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "bse/eig_result.hpp"
#include "bse/oracle.hpp"

namespace bse {

inline constexpr int kReportSchemaVersion = 1;

/// One eigenvalue row of a report.
struct PairRecord {
  double lambda = 0;
  double lambda_imag = 0;
  double coupling = 0;           // |b| driving convergence (nan for dense)
  double residual_estimate = 0;  // rho |b| / ||x||, for the unit vector
  double right_residual = 0;     // ||H x - lambda x||, unit x
  double left_residual = 0;      // ||y^* H - lambda y^*||, unit y (nan for dense)
};

/// Text report of a single run: `key=value` lines followed by one `pair=`
/// line per eigenvalue. Rows are positive eigenvalues by increasing |lambda|,
/// then negative ones by increasing |lambda|.
struct RunReport {
  std::string solver;
  std::vector<std::pair<std::string, std::string>> config;  // echoed flags
  std::string status;
  bool converged = false;
  long long restarts = 0;
  long long nconv = 0;
  long long breakdowns = 0;
  double wall_seconds = 0;
  double max_rel_residual = 0;
  double biorthogonality = 0;
  std::string definiteness;  // dense runs only
  std::vector<PairRecord> pairs;
  std::vector<Index> order;  // report row -> column of the signed result
};

/// Row permutation for signed eigenvalues: positives by increasing value,
/// then negatives by increasing magnitude. Imaginary parts are ignored.
std::vector<Index> report_order(const std::vector<double>& values);

template <typename Real>
RunReport make_report(const BseOperator<Real>& op, const EigResult<Real>& res,
                      double wall_seconds);

template <typename Real>
RunReport make_dense_report(const DenseEigenDecomposition<Real>& dec,
                            const BseOperator<Real>& op, double wall_seconds);

/// Writes the report; `precision` is the number of significant digits of
/// floating-point fields. Timing is the only field that varies between
/// identical runs.
void write_report(std::ostream& out, const RunReport& report, int precision = 12);

}  // namespace bse
