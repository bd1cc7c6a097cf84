#include "fqsde/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "fqsde/config.hpp"
#include "fqsde/errors.hpp"
#include "fqsde/experiments.hpp"

namespace fqsde {

namespace {

constexpr std::uint64_t kDefaultSeed = 20240601;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("FQSDE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError("FQSDE_SEED must be an unsigned integer", "FQSDE_SEED");
    }
  }
  return kDefaultSeed;
}

/// Writes text to a path, or to `out` for "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'", path);
  f << text;
}

struct VerifyArgs {
  std::vector<std::string> suites;
  std::string out;
  std::string failures;
  std::uint64_t seed = 0;
  int trials = -1;
  int threads = 0;
  std::vector<int> n_grid;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  SuiteConfig config;
  config.master_seed = a.seed;
  if (a.trials >= 0) config.trials = a.trials;
  config.threads = a.threads;
  if (!a.n_grid.empty()) config.n_grid = a.n_grid;
  const std::vector<std::string> names = a.suites.empty() ? suite_names() : a.suites;
  for (const auto& name : names)
    if (std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end())
      throw ConfigError("unknown suite '" + name + "'", "--suite");

  SweepTable all;
  bool ok = true;
  for (const auto& name : names) {
    const SuiteResult r = run_suite(name, config);
    out << r.summary() << '\n';
    for (const auto& f : r.table.failures)
      err << "  failure " << f.suite << " [" << f.cell << "] trial=" << f.trial << " seed=" << f.seed << ": "
          << f.message << '\n';
    ok = ok && r.passed();
    all.append(r.table);
  }
  all.sort();
  if (!a.out.empty()) emit(a.out, all.to_csv(), out);
  if (!a.failures.empty()) emit(a.failures, all.failures_csv(), out);
  return ok ? kExitOk : kExitSuiteFailure;
}

struct SolveArgs {
  std::string config;
  std::string out = "-";
  std::string trace;
};

std::string trace_csv(const std::vector<double>& deltas, const std::vector<int>& inner) {
  std::ostringstream os;
  os.precision(17);
  os << "iteration,delta,inner_iterations\n";
  for (std::size_t i = 0; i < deltas.size(); ++i)
    os << i + 1 << ',' << deltas[i] << ',' << (i < inner.size() ? inner[i] : 0) << '\n';
  return os.str();
}

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const ProblemConfig pc = build_problem_config(read_config_file(a.config));
  const QsdeProblem& problem = pc.problem;
  const std::string trace_path = a.trace.empty() ? (a.out == "-" ? "fqsde_trace.csv" : a.out + ".trace.csv") : a.trace;
  SolveReport report = [&] {
    try {
      return picard_solve(problem, pc.options);
    } catch (const NonConvergence& e) {
      emit(trace_path, trace_csv(e.deltas(), {}), out);
      throw;
    }
  }();
  emit(trace_path, trace_csv(report.deltas, report.inner_iterations), out);

  const TimeGrid& grid = problem.space->grid();
  const std::vector<double> res = node_residuals(report.trajectory.values(), problem);
  std::ostringstream os;
  os.precision(17);
  os << "node,time,lp_norm,residual,selfadjoint_defect\n";
  for (int k = 0; k <= grid.n(); ++k) {
    const CliffordElement& x = report.trajectory[k];
    os << k << ',' << grid.node(k) << ',' << lp_norm(x, problem.p) << ',' << res[static_cast<std::size_t>(k)] << ','
       << lp_norm(x - x.adjoint(), problem.p) << '\n';
  }
  emit(a.out, os.str(), out);
  std::ostringstream summary;
  summary.precision(6);
  summary << "solve PASS iterations=" << report.picard_iterations << " residual=" << report.residual;
  (a.out == "-" ? err : out) << summary.str() << '\n';
  return kExitOk;
}

struct BenchArgs {
  std::vector<double> p_grid = {2.0, 3.0, 4.0, 6.0};
  int trials = 200;
  int n = 8;
  std::string driver = "fermion";
  std::uint64_t seed = 0;
  std::string out = "-";
  int threads = 0;
};

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  SuiteConfig config;
  config.master_seed = a.seed;
  config.trials = a.trials;
  config.p_grid = a.p_grid;
  config.n_grid = {a.n};
  config.threads = a.threads;
  Driver d;
  d.kind = parse_driver_kind(a.driver);
  if (d.kind == DriverKind::LinearCombination) d = Driver::linear({1.0, 0.0}, {1.0, 0.0});
  config.drivers = {d};
  for (double p : a.p_grid)
    if (!(p >= 2.0)) throw ConfigError("bench-constants needs p >= 2", "--p");
  const SuiteResult r = run_suite("bg_ratio", config);
  std::ostringstream os;
  os.precision(17);
  os << "cell,statistic,value\n";
  for (const auto& row : r.table.rows)
    if (row.statistic == "beta_hat" || row.statistic == "alpha_hat" || row.statistic == "cp_hat" ||
        row.statistic == "hp_bound_ratio_max" || row.statistic == "lr_band_min" || row.statistic == "lr_band_max")
      os << row.cell << ',' << row.statistic << ',' << row.value << '\n';
  emit(a.out, os.str(), out);
  (a.out == "-" ? err : out) << r.summary() << '\n';
  return r.passed() ? kExitOk : kExitSuiteFailure;
}

struct BihariArgs {
  std::string rho = "linear";
  double u0 = 1.0;
  double phi = 1.0;
  double horizon = 1.0;
  double L = 1.0;
};

int cmd_bihari(const BihariArgs& a, std::ostream& out, std::ostream&) {
  if (!(a.horizon >= 0.0)) throw ConfigError("--horizon must be non-negative", "--horizon");
  if (!(a.L > 0.0)) throw ConfigError("--L must be positive", "--L");
  OsgoodModulus m = OsgoodModulus::lipschitz(a.L);
  if (a.rho == "log")
    m = OsgoodModulus::osgood("log", log_rho(a.L));
  else if (a.rho == "radial")
    m = OsgoodModulus::osgood("radial", radial_log_rho(a.L));
  else if (a.rho == "sqrt") {
    const double L = a.L;
    try {
      m = OsgoodModulus::osgood("sqrt", [L](double r) { return L * std::sqrt(r); });
    } catch (const DomainError& e) {
      throw ConfigError(e.what(), "--rho");
    }
  } else if (a.rho != "linear") {
    throw ConfigError("unknown modulus '" + a.rho + "'", "--rho");
  }
  const double phi = a.phi;
  const double b = bihari_bound(a.u0, [phi](double) { return phi; }, m, 0.0, a.horizon);
  out << std::fixed << std::setprecision(6) << b << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-mode Ito-Clifford calculus and nonlocal QSDE solver"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  bool seed_given = false;

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Run verification suites and emit a CSV table");
  v->add_option("--suite", verify.suites, "Suite name (repeatable); default all");
  v->add_option("--out", verify.out, "CSV output path ('-' for stdout)");
  v->add_option("--failures", verify.failures, "Failure list CSV path");
  v->add_option("--trials", verify.trials, "Trials per cell")->check(CLI::NonNegativeNumber);
  v->add_option("--threads", verify.threads, "Worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);
  v->add_option("--n", verify.n_grid, "Increment counts")->delimiter(',');
  v->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& x) {
    seed = x;
    seed_given = true;
  },
                                        "Master seed (default $FQSDE_SEED)");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve a problem configuration");
  s->add_option("--config", solve.config, "Problem configuration file")->required();
  s->add_option("--out", solve.out, "Trajectory CSV path ('-' for stdout)");
  s->add_option("--trace", solve.trace, "Iteration trace CSV path");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench-constants", "Measure empirical martingale-inequality constants");
  b->add_option("--p", bench.p_grid, "Exponents")->delimiter(',');
  b->add_option("--trials", bench.trials, "Trials per cell")->check(CLI::PositiveNumber);
  b->add_option("--n", bench.n, "Increment count")->check(CLI::PositiveNumber);
  b->add_option("--driver", bench.driver, "fermion | annihilation | creation | linear");
  b->add_option("--out", bench.out, "CSV output path ('-' for stdout)");
  b->add_option("--threads", bench.threads, "Worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);
  b->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& x) {
    seed = x;
    seed_given = true;
  },
                                        "Master seed (default $FQSDE_SEED)");

  BihariArgs bihari;
  auto* h = app.add_subcommand("bihari", "Evaluate the Bihari bound for a constant weight");
  h->add_option("--rho", bihari.rho, "linear | log | radial | sqrt");
  h->add_option("--u0", bihari.u0, "Initial value u0 >= 0");
  h->add_option("--phi", bihari.phi, "Constant weight phi >= 0");
  h->add_option("--horizon", bihari.horizon, "t - t0");
  h->add_option("--L", bihari.L, "Modulus scale");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitBadConfig;
  }

  try {
    if (!seed_given) seed = default_seed();
    if (*v) {
      verify.seed = seed;
      return cmd_verify(verify, out, err);
    }
    if (*s) return cmd_solve(solve, out, err);
    if (*b) {
      bench.seed = seed;
      return cmd_bench(bench, out, err);
    }
    return cmd_bihari(bihari, out, err);
  } catch (const ConfigError& e) {
    err << "configuration error";
    if (!e.key().empty()) err << " [" << e.key() << "]";
    err << ": " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const NonConvergence& e) {
    const std::string path = solve.trace.empty() ? (solve.out == "-" ? "fqsde_trace.csv" : solve.out + ".trace.csv") : solve.trace;
    err << "non-convergence: " << e.what() << "; delta trace written to " << path << '\n';
    return kExitNonConvergence;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitSuiteFailure;
  }
}

}  // namespace fqsde
