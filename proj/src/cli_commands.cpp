#include "bse/cli_commands.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "bse/gruning.hpp"
#include "bse/matgen.hpp"
#include "bse/mmio.hpp"
#include "bse/oracle.hpp"
#include "bse/projected.hpp"
#include "bse/report.hpp"
#include "bse/shao.hpp"

namespace bse {

namespace {

/// Failure while obtaining the instance from files.
class IoFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InstanceFlags {
  Index pentadiag = 0;
  Index random = 0;
  double margin = 0.5;
  std::string matrix_r;
  std::string matrix_c;
  std::uint64_t seed = kDefaultSeed;
};

struct SolveFlags {
  std::string solver = "shao";
  Index nev = 2;
  Index ncv = 0;
  Index restart_size = 0;
  double tol = 1e-8;
  std::string which = "smallest";
  std::string criterion = "rel";
  Index max_restarts = 10000;
  std::string precision = "double";
  std::string report;
  std::string vectors;
  int digits = 12;
  bool verbose = false;
};

void add_instance_flags(CLI::App* cmd, InstanceFlags& f) {
  auto* g = cmd->add_option_group("instance", "exactly one problem source");
  auto* p = g->add_option("--pentadiag", f.pentadiag, "pentadiagonal test matrix of block size N")
                ->check(CLI::PositiveNumber);
  auto* r = g->add_option("--random", f.random, "seeded random definite instance of block size N")
                ->check(CLI::PositiveNumber);
  auto* mr = g->add_option("--matrix-r", f.matrix_r, "Matrix Market file holding R");
  auto* mc = g->add_option("--matrix-c", f.matrix_c, "Matrix Market file holding C");
  mr->needs(mc);
  mc->needs(mr);
  p->excludes(r)->excludes(mr)->excludes(mc);
  r->excludes(mr)->excludes(mc);
  g->require_option(1, 2);
  cmd->add_option("--seed", f.seed, "seed of the random instance and of the start vector")
      ->capture_default_str();
  cmd->add_option("--margin", f.margin, "coupling strength of --random relative to R")
      ->capture_default_str();
}

template <typename Real>
BseOperator<Real> load_instance(const InstanceFlags& f) {
  if (f.pentadiag > 0) {
    PentadiagSpec spec;
    spec.n = f.pentadiag;
    return gen_pentadiag<Real>(spec);
  }
  if (f.random > 0) return gen_random_definite<Real>(f.random, f.seed, f.margin);
  try {
    return read_blocks<Real>(f.matrix_r, f.matrix_c);
  } catch (const Error& e) {
    throw IoFailure(e.what());
  }
}

std::string instance_name(const InstanceFlags& f) {
  if (f.pentadiag > 0) return "pentadiag:" + std::to_string(f.pentadiag);
  if (f.random > 0) {
    std::ostringstream s;
    s << "random:" << f.random << ":margin=" << f.margin;
    return s.str();
  }
  return "files:" + f.matrix_r + "," + f.matrix_c;
}

template <typename Real>
SolverConfig<Real> make_config(const SolveFlags& f, const InstanceFlags& inst, Index n) {
  SolverConfig<Real> cfg;
  cfg.nev = f.nev;
  cfg.ncv = f.ncv > 0 ? f.ncv : std::min(n, std::max(f.nev, f.nev / 2 + 10));
  cfg.restart_size = f.restart_size;
  cfg.tol = static_cast<Real>(f.tol);
  cfg.which = f.which == "largest" ? Which::Largest : Which::Smallest;
  cfg.criterion = f.criterion == "abs" ? Criterion::Absolute : Criterion::Relative;
  cfg.max_restarts = f.max_restarts;
  cfg.seed = inst.seed;
  return cfg;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

template <typename Real>
void echo_config(RunReport& rep, const SolverConfig<Real>& cfg, const InstanceFlags& inst,
                 const SolveFlags& f, Index n) {
  rep.config = {
      {"instance", instance_name(inst)},
      {"n", std::to_string(n)},
      {"precision", f.precision},
      {"seed", std::to_string(inst.seed)},
  };
  if (f.solver == "dense") return;
  rep.config.insert(rep.config.end(),
                    {{"nev", std::to_string(cfg.nev)},
                     {"ncv", std::to_string(cfg.ncv)},
                     {"restart_size", cfg.restart_size > 0 ? std::to_string(cfg.restart_size)
                                                           : std::string("auto")},
                     {"tol", fmt(f.tol)},
                     {"which", f.which},
                     {"criterion", f.criterion},
                     {"max_restarts", std::to_string(cfg.max_restarts)}});
}

template <typename Real>
EigResult<Real> run_solver(const std::string& name, const BseOperator<Real>& op,
                           const SolverConfig<Real>& cfg, const ProgressFn& progress) {
  if (name == "shao") return shao_solve(op, cfg, progress);
  if (name == "gruning") return gruning_solve(op, cfg, progress);
  if (name == "projectedbse") return projected_solve(op, cfg, progress);
  throw InvalidConfig("--solver: unknown solver '" + name + "'");
}

int exit_code(const RunReport& rep) {
  if (rep.status == "converged") return kExitOk;
  if (rep.status == "breakdown-exhausted") return kExitBreakdown;
  return kExitNotConverged;
}

struct Timed {
  RunReport report;
  CMatrix<double> vectors;  // right eigenvectors in report row order
  std::vector<double> values;
};

template <typename Real>
Timed solve_once(const std::string& solver, const BseOperator<Real>& op,
                 const SolveFlags& f, const InstanceFlags& inst, std::ostream& err) {
  using clock = std::chrono::steady_clock;
  Timed t;
  const Index n = op.size();
  const SolverConfig<Real> cfg = make_config<Real>(f, inst, n);
  if (solver == "dense") {
    const auto start = clock::now();
    const auto dec = dense_solve(op);
    const double secs = std::chrono::duration<double>(clock::now() - start).count();
    t.report = make_dense_report(dec, op, secs);
    t.vectors.resize(2 * n, Index(t.report.order.size()));
    for (std::size_t i = 0; i < t.report.order.size(); ++i)
      t.vectors.col(Index(i)) = dec.right_vectors.col(t.report.order[i]).template cast<std::complex<double>>();
  } else {
    ProgressFn progress;
    if (f.verbose)
      progress = [&](const ProgressRecord& p) {
        err << "restart=" << p.restart << " nconv=" << p.nconv << " b_head=" << p.b_head << '\n';
      };
    const auto start = clock::now();
    const EigResult<Real> res = run_solver(solver, op, cfg, progress);
    const double secs = std::chrono::duration<double>(clock::now() - start).count();
    t.report = make_report(op, res, secs);
    const CMatrix<Real> X = right_eigenvectors(res);
    t.vectors.resize(X.rows(), Index(t.report.order.size()));
    for (std::size_t i = 0; i < t.report.order.size(); ++i)
      t.vectors.col(Index(i)) = X.col(t.report.order[i]).template cast<std::complex<double>>();
  }
  t.report.solver = solver;
  echo_config(t.report, cfg, inst, f, n);
  for (const auto& p : t.report.pairs) t.values.push_back(p.lambda);
  return t;
}

template <typename Real>
int cmd_solve(const SolveFlags& f, const InstanceFlags& inst, std::ostream& out,
              std::ostream& err) {
  const BseOperator<Real> op = load_instance<Real>(inst);
  Timed t = solve_once<Real>(f.solver, op, f, inst, err);
  if (f.report.empty()) {
    write_report(out, t.report, f.digits);
  } else {
    std::ofstream file(f.report);
    if (!file) throw IoFailure("--report: cannot open " + f.report);
    write_report(file, t.report, f.digits);
    if (!file) throw IoFailure("--report: write to " + f.report + " failed");
  }
  if (!f.vectors.empty()) {
    try {
      write_block<double>(f.vectors, Block<double>(t.vectors), BlockSymmetry::Symmetric);
    } catch (const Error& e) {
      throw IoFailure(std::string("--vectors: ") + e.what());
    }
  }
  return exit_code(t.report);
}

/// Largest relative gap between nearest-paired eigenvalues of two runs.
double max_deviation(const std::vector<double>& a, const std::vector<double>& b) {
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  RVector<double> approx = Eigen::Map<const RVector<double>>(small.data(), Index(small.size()));
  CVector<double> exact(Index(large.size()));
  for (std::size_t i = 0; i < large.size(); ++i) exact(Index(i)) = large[i];
  const auto match =
      match_eigenvalues<double>(approx, exact, std::numeric_limits<double>::infinity());
  double worst = 0;
  for (Index i = 0; i < approx.size(); ++i) {
    if (match[i] < 0) return std::numeric_limits<double>::infinity();
    const double e = exact(match[i]).real();
    worst = std::max(worst, std::abs(approx(i) - e) / std::abs(e));
  }
  return worst;
}

template <typename Real>
int cmd_compare(const std::vector<std::string>& solvers, const SolveFlags& f,
                const InstanceFlags& inst, std::ostream& out, std::ostream& err) {
  const BseOperator<Real> op = load_instance<Real>(inst);
  std::vector<Timed> runs;
  int code = kExitOk;
  for (const auto& s : solvers) {
    SolveFlags fs = f;
    fs.solver = s;
    runs.push_back(solve_once<Real>(s, op, fs, inst, err));
    code = std::max(code, exit_code(runs.back().report));
  }
  out << "schema_version=" << kReportSchemaVersion << '\n';
  out << "config.instance=" << instance_name(inst) << '\n';
  out << "config.n=" << op.size() << '\n';
  out << "run_columns=solver status restarts wall_seconds max_rel_residual biorthogonality\n";
  out << std::setprecision(6);
  for (const auto& r : runs) {
    const auto& rep = r.report;
    out << "run=" << rep.solver << ' ' << rep.status << ' ' << rep.restarts << ' '
        << rep.wall_seconds << ' ' << std::scientific << rep.max_rel_residual << ' '
        << rep.biorthogonality << std::defaultfloat << '\n';
  }
  out << std::scientific << std::setprecision(3);
  for (std::size_t i = 0; i < runs.size(); ++i)
    for (std::size_t j = i + 1; j < runs.size(); ++j)
      out << "deviation." << runs[i].report.solver << '.' << runs[j].report.solver << '='
          << max_deviation(runs[i].values, runs[j].values) << '\n';
  out << std::defaultfloat;
  return code;
}

int cmd_check(const InstanceFlags& inst, std::ostream& out) {
  const BseOperator<double> op = load_instance<double>(inst);
  const Definiteness d = definiteness_check(op);
  out << "config.instance=" << instance_name(inst) << '\n';
  out << "n=" << op.size() << '\n';
  out << "norm_bound=" << std::setprecision(12) << op.norm_bound() << '\n';
  out << "definiteness=" << to_string(d) << '\n';
  return d == Definiteness::Definite ? kExitOk : kExitIndefinite;
}

int cmd_gen(const InstanceFlags& inst, const std::string& out_r, const std::string& out_c,
            std::ostream& out) {
  if (!inst.matrix_r.empty())
    throw InvalidConfig("gen: use --pentadiag or --random, not --matrix-r/--matrix-c");
  const BseOperator<double> op = load_instance<double>(inst);
  try {
    write_blocks(op, out_r, out_c);
  } catch (const Error& e) {
    throw IoFailure(e.what());
  }
  out << "wrote " << out_r << " and " << out_c << " (n=" << op.size() << ")\n";
  return kExitOk;
}

template <typename Fn>
int guarded(Fn fn, std::ostream& err) {
  try {
    return fn();
  } catch (const IoFailure& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const IndefiniteProblem& e) {
    err << "error: " << e.what() << '\n';
    return kExitIndefinite;
  } catch (const NonConvergence& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structure-preserving thick-restart Lanczos eigensolvers for BSE matrices",
               "bse-trl"};
  app.require_subcommand(1);

  InstanceFlags inst;
  SolveFlags flags;
  std::vector<std::string> solvers{"shao", "gruning", "projectedbse"};
  std::string out_r, out_c;

  auto add_solve_flags = [&](CLI::App* cmd, bool with_solver) {
    if (with_solver)
      cmd->add_option("--solver", flags.solver, "eigensolver")
          ->check(CLI::IsMember({"shao", "gruning", "projectedbse", "dense"}))
          ->capture_default_str();
    cmd->add_option("--nev", flags.nev, "wanted eigenvalues counting both signs (even)")
        ->capture_default_str();
    cmd->add_option("--ncv", flags.ncv, "basis size k (default min(n, max(nev, nev/2+10)))");
    cmd->add_option("--restart-size", flags.restart_size, "restart size r (default k/2)");
    cmd->add_option("--tol", flags.tol, "convergence tolerance")->capture_default_str();
    cmd->add_option("--which", flags.which, "wanted end of the spectrum")
        ->check(CLI::IsMember({"smallest", "largest"}))
        ->capture_default_str();
    cmd->add_option("--criterion", flags.criterion, "relative or absolute convergence test")
        ->check(CLI::IsMember({"rel", "abs"}))
        ->capture_default_str();
    cmd->add_option("--max-restarts", flags.max_restarts, "restart cap")->capture_default_str();
    cmd->add_option("--precision", flags.precision, "working precision")
        ->check(CLI::IsMember({"double", "single"}))
        ->capture_default_str();
    cmd->add_flag("--verbose", flags.verbose, "print one progress line per restart to stderr");
    add_instance_flags(cmd, inst);
  };

  auto* solve = app.add_subcommand("solve", "solve one instance and print a report");
  add_solve_flags(solve, true);
  solve->add_option("--report", flags.report, "write the report here instead of stdout");
  solve->add_option("--vectors", flags.vectors, "write right eigenvectors (Matrix Market array)");
  solve->add_option("--digits", flags.digits, "significant digits in the report")
      ->check(CLI::Range(1, 17))
      ->capture_default_str();

  auto* compare = app.add_subcommand("compare", "run several solvers on one instance");
  add_solve_flags(compare, false);
  compare->add_option("--solvers", solvers, "solvers to run, in order")
      ->delimiter(',')
      ->check(CLI::IsMember({"shao", "gruning", "projectedbse", "dense"}))
      ->capture_default_str();

  auto* gen = app.add_subcommand("gen", "write an instance as Matrix Market files");
  add_instance_flags(gen, inst);
  gen->add_option("--out-r", out_r, "output file for R")->required();
  gen->add_option("--out-c", out_c, "output file for C")->required();

  auto* check = app.add_subcommand("check", "dense definiteness check of an instance");
  add_instance_flags(check, inst);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  const bool single = flags.precision == "single";
  if (solve->parsed())
    return guarded(
        [&] {
          return single ? cmd_solve<float>(flags, inst, out, err)
                        : cmd_solve<double>(flags, inst, out, err);
        },
        err);
  if (compare->parsed())
    return guarded(
        [&] {
          return single ? cmd_compare<float>(solvers, flags, inst, out, err)
                        : cmd_compare<double>(solvers, flags, inst, out, err);
        },
        err);
  if (gen->parsed()) return guarded([&] { return cmd_gen(inst, out_r, out_c, out); }, err);
  return guarded([&] { return cmd_check(inst, out); }, err);
}

}  // namespace bse
