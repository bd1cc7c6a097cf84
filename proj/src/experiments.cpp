#include "fqsde/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "fqsde/errors.hpp"
#include "fqsde/random.hpp"

namespace fqsde {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string driver_label(const Driver& d) {
  if (d.kind != DriverKind::LinearCombination) return d.name();
  return "linear(" + num(d.alpha1.real()) + (d.alpha1.imag() ? "+" + num(d.alpha1.imag()) + "i" : "") + "," +
         num(d.alpha2.real()) + (d.alpha2.imag() ? "+" + num(d.alpha2.imag()) + "i" : "") + ")";
}

int effective_n(const Driver& d, int n, const SuiteConfig& config) {
  return d.layout() == IncrementLayout::MajoranaPair ? std::min(n, config.max_pair_n) : n;
}

SpacePtr uniform_space(int n, IncrementLayout layout) { return make_space(TimeGrid::uniform(0.0, 1.0, n), layout); }

/// Metrics and hard-constraint violations observed in one randomized trial.
struct TrialRecord {
  std::map<std::string, double> metrics;
  std::vector<std::string> violations;
  void require(bool ok, const std::string& what) {
    if (!ok) violations.push_back(what);
  }
};

using TrialFn = std::function<void(Rng&, TrialRecord&)>;

std::uint64_t trial_seed(const SuiteConfig& config, const std::string& suite, const std::string& cell, int trial) {
  return split_seed(split_seed(config.master_seed, stream_id(suite + "|" + cell)), static_cast<std::uint64_t>(trial));
}

/// Runs `trials` seeded trials of one cell and folds them into min/median/max rows.
void run_cell(SweepTable& table, const SuiteConfig& config, const std::string& suite, const std::string& cell,
              int trials, const TrialFn& fn) {
  std::vector<TrialRecord> records(static_cast<std::size_t>(trials));
  std::vector<std::string> errors(static_cast<std::size_t>(trials));
  parallel_for(trials, config.threads, [&](int i) {
    Rng rng(trial_seed(config, suite, cell, i));
    try {
      fn(rng, records[static_cast<std::size_t>(i)]);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  });
  std::map<std::string, std::vector<double>> by_name;
  for (int i = 0; i < trials; ++i) {
    const auto& rec = records[static_cast<std::size_t>(i)];
    const std::uint64_t seed = trial_seed(config, suite, cell, i);
    if (!errors[static_cast<std::size_t>(i)].empty())
      table.fail({suite, cell, i, seed, errors[static_cast<std::size_t>(i)]});
    for (const auto& v : rec.violations) table.fail({suite, cell, i, seed, v});
    for (const auto& [name, value] : rec.metrics) by_name[name].push_back(value);
  }
  for (auto& [name, values] : by_name) table.add_stats(suite, cell, name, std::move(values));
}

/// Runs independent cell builders concurrently and appends their tables in order.
SweepTable run_cells(const SuiteConfig& config, const std::vector<std::function<void(SweepTable&)>>& cells) {
  std::vector<SweepTable> parts(cells.size());
  parallel_for(static_cast<int>(cells.size()), config.threads,
               [&](int i) { cells[static_cast<std::size_t>(i)](parts[static_cast<std::size_t>(i)]); });
  SweepTable out;
  for (const auto& p : parts) out.append(p);
  return out;
}

/// Catches solver and contract errors into failures for the given cell.
void guarded(SweepTable& table, const std::string& suite, const std::string& cell, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    table.fail({suite, cell, -1, 0, e.what()});
  }
}

std::vector<int> with_twelve(std::vector<int> ns) {
  if (std::find(ns.begin(), ns.end(), 12) == ns.end()) ns.push_back(12);
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  return ns;
}

double sup_distance(const AdaptedProcess& a, const Trajectory& b) {
  double worst = 0.0;
  for (int k = 0; k < a.size(); ++k) worst = std::max(worst, op_norm(a[k] - b[static_cast<std::size_t>(k)]));
  return worst;
}

// ---------------------------------------------------------------------------------------------
// Inequality suites

SweepTable suite_bg_ratio(const SuiteConfig& config) {
  const std::string suite = "bg_ratio";
  SweepTable table;
  std::set<std::tuple<std::string, int, double>> seen;
  for (const Driver& driver : config.drivers) {
    for (int n0 : config.n_grid) {
      const int n = effective_n(driver, n0, config);
      for (double p : config.p_grid) {
        if (!seen.insert({driver_label(driver), n, p}).second) continue;
        const SpacePtr space = uniform_space(n, driver.layout());
        const std::string cell = cell_label({{"driver", driver_label(driver)}, {"n", std::to_string(n)}, {"p", num(p)}});
        const bool fermion = driver.kind == DriverKind::FermionField;
        run_cell(table, config, suite, cell, config.trials, [&, space, driver, n, p](Rng& rng, TrialRecord& rec) {
          const AdaptedProcess f = random_adapted_process(space, n, rng);
          const InequalityReport right = check_bg(f, p, Side::Right, driver);
          const InequalityReport left = check_bg(f, p, Side::Left, driver);
          rec.metrics["ratio_right"] = right.ratio;
          rec.metrics["ratio_left"] = left.ratio;
          rec.metrics["inverse_ratio"] = std::max(right.inverse_ratio, left.inverse_ratio);
          rec.metrics["lr_band"] = left.lhs / right.lhs;
          const double cp = std::max(check_l2lp_bound(f, p, Side::Right, driver).ratio,
                                     check_l2lp_bound(f, p, Side::Left, driver).ratio);
          rec.metrics["cp_ratio"] = cp;
          if (fermion) {
            const double hp = check_hp_bound(f, p).ratio;
            rec.metrics["hp_bound_ratio"] = hp;
            rec.require(hp <= 1.0 + 1e-9, "H^p bound ratio " + num(hp) + " exceeds 1");
            if (p == 2.0) {
              const double lhs = std::pow(right.lhs, 2.0);
              const double rhs = std::pow(lqlp_norm(f, 2.0, 2.0, n), 2.0);
              const double defect = std::abs(lhs - rhs) / rhs;
              rec.metrics["isometry_defect"] = defect;
              rec.require(defect < 1e-9, "Ito isometry defect " + num(defect));
            }
          }
          if (rng() % 8 == 0) {
            const double m = std::max(martingale_check(f, driver, Side::Right, p), martingale_check(f, driver, Side::Left, p));
            rec.metrics["martingale_defect"] = m;
            rec.require(m < 1e-10, "martingale defect " + num(m));
          }
        });
        // Empirical constants: the largest observed ratios in this cell.
        double beta = 0.0;
        double alpha = 0.0;
        double cp = 0.0;
        for (const auto& row : table.rows) {
          if (row.cell != cell) continue;
          if (row.statistic == "ratio_right_max" || row.statistic == "ratio_left_max") beta = std::max(beta, row.value);
          if (row.statistic == "inverse_ratio_max") alpha = row.value;
          if (row.statistic == "cp_ratio_max") cp = row.value;
        }
        if (config.trials > 0) {
          table.add(suite, cell, "beta_hat", beta);
          table.add(suite, cell, "alpha_hat", alpha);
          table.add(suite, cell, "cp_hat", std::max(1.0, cp));
        }
      }
    }
  }
  return table;
}

SweepTable suite_norm_exchange(const SuiteConfig& config) {
  const std::string suite = "norm_exchange";
  SweepTable table;
  for (int n : config.n_grid) {
    const SpacePtr space = uniform_space(n, IncrementLayout::Single);
    for (const auto& [q, p] : config.exchange_grid) {
      const std::string cell = cell_label({{"n", std::to_string(n)}, {"p", num(p)}, {"q", num(q)}});
      run_cell(table, config, suite, cell, config.trials, [&, space, n, q, p](Rng& rng, TrialRecord& rec) {
        const auto kind = static_cast<ProcessKind>(rng() % 4);
        const AdaptedProcess f = random_adapted_process(space, n, rng, kind);
        const double ratio = check_norm_exchange(f, q, p).ratio;
        rec.metrics["ratio"] = ratio;
        rec.require(ratio <= 1.0 + 1e-9, "norm-exchange ratio " + num(ratio) + " exceeds 1");
      });
    }
  }
  return table;
}

SweepTable suite_car_identity(const SuiteConfig& config) {
  const std::string suite = "car_identity";
  SweepTable table;
  auto record = [&](const std::string& cell, const std::string& stat, double value) {
    table.add(suite, cell, stat, value);
    if (value > 1e-12) table.fail({suite, cell, -1, 0, stat + " = " + num(value) + " exceeds 1e-12"});
  };
  for (int n : with_twelve(config.n_grid)) {
    const SpacePtr space = uniform_space(n, IncrementLayout::Single);
    const std::string cell = cell_label({{"driver", "fermion"}, {"n", std::to_string(n)}});
    double gen = 0.0;
    for (int j = 1; j <= space->generator_count(); ++j)
      for (int k = j; k <= space->generator_count(); ++k) {
        const CliffordElement ej = CliffordElement::generator(space, j);
        const CliffordElement ek = CliffordElement::generator(space, k);
        const CliffordElement target = CliffordElement::scalar(space, j == k ? 2.0 : 0.0);
        gen = std::max(gen, op_norm(anticommutator(ej, ek) - target));
        if (j == k) gen = std::max(gen, op_norm(ej - ej.adjoint()));
      }
    record(cell, "generator_defect", gen);
    double inc = 0.0;
    CliffordElement w = CliffordElement::zero(space);
    for (int k = 0; k < n; ++k) {
      const CliffordElement dk = fermion_increment(space, k);
      inc = std::max(inc, op_norm(dk * dk - CliffordElement::scalar(space, space->grid().step(k))));
      for (int j = 0; j < k; ++j) inc = std::max(inc, op_norm(anticommutator(fermion_increment(space, j), dk)));
      w += dk;
    }
    inc = std::max(inc, op_norm(w * w - CliffordElement::scalar(space, space->grid().length())));
    record(cell, "increment_defect", inc);
  }
  std::set<int> pair_ns;
  for (int n : with_twelve(config.n_grid)) pair_ns.insert(std::min(n, config.max_pair_n));
  for (int n : pair_ns) {
    const SpacePtr space = uniform_space(n, IncrementLayout::MajoranaPair);
    const std::string cell = cell_label({{"driver", "annihilation"}, {"n", std::to_string(n)}});
    double car = 0.0;
    double nil = 0.0;
    double cross = 0.0;
    double cumulative = 0.0;
    CliffordElement a = CliffordElement::zero(space);
    for (int k = 0; k < n; ++k) {
      const CliffordElement da = annihilation_increment(space, k);
      const CliffordElement dc = creation_increment(space, k);
      const double dt = space->grid().step(k);
      car = std::max(car, op_norm(da * dc + dc * da - CliffordElement::scalar(space, dt)));
      nil = std::max(nil, op_norm(da * da));
      for (int j = 0; j < k; ++j) {
        cross = std::max(cross, op_norm(anticommutator(annihilation_increment(space, j), dc)));
        cross = std::max(cross, op_norm(anticommutator(annihilation_increment(space, j), da)));
      }
      a += da;
      const CliffordElement as = a.adjoint();
      cumulative = std::max(
          cumulative, op_norm(a * as + as * a - CliffordElement::scalar(space, space->grid().node(k + 1) - space->grid().t0())));
    }
    record(cell, "car_defect", car);
    record(cell, "nilpotency_defect", nil);
    record(cell, "cross_anticommutator", cross);
    record(cell, "cumulative_car_defect", cumulative);
  }
  return table;
}

SweepTable suite_parity_lemma(const SuiteConfig& config) {
  const std::string suite = "parity_lemma";
  SweepTable table;
  struct Case {
    Driver driver;
    int n;
  };
  std::vector<Case> cases;
  for (int n : with_twelve(config.n_grid)) cases.push_back({Driver::fermion(), n});
  std::set<int> pair_ns;
  for (int n : config.n_grid) pair_ns.insert(std::min(n, config.max_pair_n));
  for (int n : pair_ns) cases.push_back({Driver::annihilation(), n});
  for (const Case& c : cases) {
    const SpacePtr space = uniform_space(c.n, c.driver.layout());
    const std::string cell = cell_label({{"driver", driver_label(c.driver)}, {"n", std::to_string(c.n)}});
    const int trials = std::max(config.trials, 2 * (c.n + 1));
    run_cell(table, config, suite, cell, trials, [&, space, c](Rng& rng, TrialRecord& rec) {
      const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(c.n + 1));
      const FiltrationLevel level = space->node_level(k);
      const ParityParts parts = parity_decompose(random_level_element(space, level, rng));
      const CliffordElement& h = rng() % 2 ? parts.odd : parts.even;
      const double d = parity_exchange_defect(h, level, c.driver);
      rec.metrics["defect"] = d;
      rec.require(d <= 1e-12, "parity exchange defect " + num(d) + " at level " + std::to_string(k));

      std::vector<CliffordElement> even;
      std::vector<CliffordElement> odd;
      for (int j = 0; j < c.n; ++j) {
        const ParityParts pj = parity_decompose(random_level_element(space, space->node_level(j), rng));
        even.push_back(pj.even);
        odd.push_back(pj.odd);
      }
      const AdaptedProcess fe(space, even);
      const AdaptedProcess fo(space, odd);
      const double de = op_norm(driver_integral(fe, c.driver, c.n, Side::Right) - driver_integral(fe, c.driver, c.n, Side::Left));
      const double dn = op_norm(driver_integral(fo, c.driver, c.n, Side::Right) + driver_integral(fo, c.driver, c.n, Side::Left));
      rec.metrics["even_left_right_defect"] = de;
      rec.metrics["odd_left_right_defect"] = dn;
      rec.require(de <= 1e-12, "even integrand left/right defect " + num(de));
      rec.require(dn <= 1e-12, "odd integrand left/right defect " + num(dn));
    });
  }
  return table;
}

// ---------------------------------------------------------------------------------------------
// Solver suites

struct SolverCase {
  std::string problem;
  Driver driver;
  int n;
};

std::vector<SolverCase> solver_cases(const SuiteConfig& config, bool lipschitz_only) {
  std::vector<SolverCase> out;
  for (int n : config.n_grid)
    for (const std::string& name : builtin_problem_names()) {
      if (lipschitz_only && name.rfind("osgood", 0) == 0) continue;
      out.push_back({name, Driver::fermion(), n});
    }
  std::set<int> pair_ns;
  for (int n : config.n_grid) pair_ns.insert(std::min(n, std::min(config.max_pair_n, 4)));
  for (int n : pair_ns)
    for (const Driver& d : {Driver::annihilation(), Driver::linear({1.0, 0.0}, {0.0, 0.5})})
      for (const std::string name : {"linear_mixed", "linear_nonlocal", "osgood_radial"}) {
        if (lipschitz_only && name.rfind("osgood", 0) == 0) continue;
        out.push_back({name, d, n});
      }
  return out;
}

std::string case_cell(const SolverCase& c) {
  return cell_label({{"problem", c.problem}, {"driver", driver_label(c.driver)}, {"n", std::to_string(c.n)}});
}

QsdeProblem case_problem(const SolverCase& c, const SuiteConfig& config) {
  BuiltinOptions opts;
  opts.n = c.n;
  opts.driver = c.driver;
  opts.p = config.solver_p;
  return make_builtin_problem(c.problem, opts);
}

SolveOptions solve_options(const SuiteConfig& config) {
  SolveOptions o;
  o.tol = config.tol;
  return o;
}

SweepTable suite_picard(const SuiteConfig& config) {
  const std::string suite = "picard";
  std::vector<std::function<void(SweepTable&)>> cells;
  for (const SolverCase& c : solver_cases(config, false)) {
    cells.push_back([c, &config, suite](SweepTable& t) {
      const std::string cell = case_cell(c);
      guarded(t, suite, cell, [&] {
        const QsdeProblem problem = case_problem(c, config);
        const bool lipschitz = problem.modulus().is_lipschitz();
        const SolveReport r = picard_solve(problem, solve_options(config));
        t.add(suite, cell, "iterations", r.picard_iterations);
        t.add(suite, cell, "residual", r.residual);
        t.add(suite, cell, "final_delta", r.deltas.back());
        t.add(suite, cell, "max_inner_rate", r.max_contraction_rate);
        t.add(suite, cell, "adaptedness_defect", r.max_iterate_adaptedness_defect);
        const double bound = lipschitz ? 1e-8 : 1e-6;
        if (!(r.residual < bound)) t.fail({suite, cell, -1, 0, "residual " + num(r.residual) + " above " + num(bound)});
        if (r.max_iterate_adaptedness_defect > 1e-10)
          t.fail({suite, cell, -1, 0, "iterate adaptedness defect " + num(r.max_iterate_adaptedness_defect)});
        if (lipschitz) {
          int increases = 0;
          for (std::size_t i = 2; i + 1 < r.deltas.size(); ++i)
            if (r.deltas[i + 1] > r.deltas[i] * (1.0 + 1e-9) + 1e-14) ++increases;
          t.add(suite, cell, "delta_increases_after_burn_in", increases);
          if (increases > 0) t.fail({suite, cell, -1, 0, "Picard deltas increase after the burn-in"});
        }
        if (lipschitz && problem.R.is_zero()) {
          const double gap = sup_distance(r.trajectory, forward_euler_oracle(problem));
          t.add(suite, cell, "oracle_gap", gap);
          if (!(gap < 1e-10)) t.fail({suite, cell, -1, 0, "oracle gap " + num(gap)});
        }
      });
    });
  }
  return run_cells(config, cells);
}

SweepTable suite_uniqueness(const SuiteConfig& config) {
  const std::string suite = "uniqueness";
  std::vector<std::function<void(SweepTable&)>> cells;
  for (const SolverCase& c : solver_cases(config, false)) {
    cells.push_back([c, &config, suite](SweepTable& t) {
      const std::string cell = case_cell(c);
      guarded(t, suite, cell, [&] {
        const QsdeProblem problem = case_problem(c, config);
        const double gap = uniqueness_probe(problem, config.tol, trial_seed(config, suite, cell, 0));
        t.add(suite, cell, "gap", gap);
        if (!(gap < 2.0 * config.tol)) t.fail({suite, cell, -1, 0, "uniqueness gap " + num(gap)});
      });
    });
  }
  return run_cells(config, cells);
}

SweepTable suite_gronwall(const SuiteConfig& config) {
  const std::string suite = "gronwall";
  std::vector<std::function<void(SweepTable&)>> cells;
  for (const SolverCase& c : solver_cases(config, true)) {
    for (double dz : {1e-1, 1e-3}) {
      cells.push_back([c, dz, &config, suite](SweepTable& t) {
        const std::string cell = case_cell(c) + ";dz=" + num(dz);
        guarded(t, suite, cell, [&] {
          const QsdeProblem problem = case_problem(c, config);
          const double cp = empirical_cp(problem.space, problem.driver, problem.p, std::max(1, std::min(config.trials, 50)),
                                         trial_seed(config, suite, cell, 0));
          const CliffordElement z2 = problem.Z + CliffordElement::scalar(problem.space, dz);
          const StabilityCurves s = stability_experiment(problem, problem.Z, z2, cp, solve_options(config));
          t.add(suite, cell, "cp", cp);
          t.add(suite, cell, "rate", s.rate);
          t.add(suite, cell, "worst_ratio", s.worst_ratio);
          t.add(suite, cell, "max_lhs", *std::max_element(s.lhs.begin(), s.lhs.end()));
          if (!s.dominated) t.fail({suite, cell, -1, 0, "Gronwall bound violated, worst ratio " + num(s.worst_ratio)});
        });
      });
    }
  }
  return run_cells(config, cells);
}

SweepTable suite_coeff_stability(const SuiteConfig& config) {
  const std::string suite = "coeff_stability";
  std::vector<std::function<void(SweepTable&)>> cells;
  struct Variant {
    std::string problem;
    char target;  // 'F' or 'R'
  };
  const std::vector<Variant> variants = {{"linear_mixed", 'F'}, {"linear_nonlocal", 'F'}, {"linear_nonlocal", 'R'},
                                         {"selfadjoint_even", 'F'}};
  for (int n : config.n_grid) {
    for (const Variant& v : variants) {
      cells.push_back([v, n, &config, suite](SweepTable& t) {
        const std::string cell =
            cell_label({{"problem", v.problem}, {"perturb", std::string(1, v.target)}, {"n", std::to_string(n)}});
        guarded(t, suite, cell, [&] {
          BuiltinOptions opts;
          opts.n = n;
          opts.p = config.solver_p;
          const QsdeProblem base = make_builtin_problem(v.problem, opts);
          auto perturb = [&](double delta) {
            QsdeProblem q = base;
            if (v.target == 'F')
              q.F = shifted(base.F, delta);
            else
              q.R = shifted(base.R, delta);
            return q;
          };
          std::vector<QsdeProblem> perturbed;
          std::vector<double> deltas;
          for (int k = 1; k <= 8; ++k) {
            deltas.push_back(std::ldexp(1.0, -k));
            perturbed.push_back(perturb(deltas.back()));
          }
          const SolveOptions opt = solve_options(config);
          const CoefficientStabilityTable tab = coefficient_stability_experiment(base, perturbed, deltas, opt);
          for (const auto& row : tab.rows) t.add(suite, cell + ";k=" + std::to_string(row.index), "sup_distance", row.sup_distance);
          t.add(suite, cell, "monotone", tab.monotone_decreasing ? 1.0 : 0.0);
          if (!tab.monotone_decreasing) t.fail({suite, cell, -1, 0, "perturbation table is not strictly decreasing"});
          // A zero perturbation goes through the same shifted map and must reproduce the base solution.
          QsdeProblem same = base;
          same.F.eval = [f = base.F](const CliffordElement& x, double s) { return f(x, s); };
          const CoefficientStabilityTable zero = coefficient_stability_experiment(base, {same}, {0.0}, opt);
          const double d0 = zero.rows.front().sup_distance;
          t.add(suite, cell, "zero_delta_distance", d0);
          if (!(d0 < 10.0 * config.tol)) t.fail({suite, cell, -1, 0, "zero perturbation moved the solution by " + num(d0)});
        });
      });
    }
  }
  return run_cells(config, cells);
}

SweepTable suite_selfadjoint(const SuiteConfig& config) {
  const std::string suite = "selfadjoint";
  std::vector<std::function<void(SweepTable&)>> cells;
  for (int n : config.n_grid) {
    for (const bool initial_mode : {false, true}) {
      cells.push_back([n, initial_mode, &config, suite](SweepTable& t) {
        const std::string cell = cell_label({{"problem", "selfadjoint_even"},
                                             {"mode", initial_mode ? "initial" : "pointwise"},
                                             {"n", std::to_string(n)}});
        guarded(t, suite, cell, [&] {
          BuiltinOptions opts;
          opts.n = n;
          opts.p = config.solver_p;
          QsdeProblem problem = make_builtin_problem("selfadjoint_even", opts);
          if (initial_mode) problem.mode = NonlocalMode::InitialOnly;
          const SelfAdjointCheck r = selfadjoint_solve_check(problem, solve_options(config));
          t.add(suite, cell, "max_iterate_defect", r.max_iterate_defect);
          t.add(suite, cell, "integral_exchange_defect", r.integral_exchange_defect);
          t.add(suite, cell, "iterations", r.iterations);
          if (!(r.max_iterate_defect < 1e-10)) t.fail({suite, cell, -1, 0, "iterate defect " + num(r.max_iterate_defect)});
          if (!(r.integral_exchange_defect < 1e-12))
            t.fail({suite, cell, -1, 0, "left/right integral defect " + num(r.integral_exchange_defect)});
        });
      });
    }
  }
  return run_cells(config, cells);
}

SweepTable suite_bihari(const SuiteConfig&) {
  const std::string suite = "bihari";
  SweepTable t;
  const OsgoodModulus linear = OsgoodModulus::lipschitz(1.0);
  const OsgoodModulus linear_osgood = OsgoodModulus::osgood("linear", [](double r) { return r; });
  for (double u0 : {0.1, 1.0, 3.0})
    for (double phi : {0.5, 1.0})
      for (double h : {0.25, 0.5, 1.0, 2.0}) {
        const std::string cell = cell_label({{"u0", num(u0)}, {"phi", num(phi)}, {"horizon", num(h)}});
        auto f = [phi](double) { return phi; };
        const double exact = u0 * std::exp(phi * h);
        const double err = std::max(std::abs(bihari_bound(u0, f, linear, 0.0, h) - exact),
                                    std::abs(bihari_bound(u0, f, linear_osgood, 0.0, h) - exact));
        t.add(suite, cell, "linear_error", err);
        if (!(err < 1e-6)) t.fail({suite, cell, -1, 0, "linear-modulus error " + num(err)});
      }
  {
    const std::string cell = cell_label({{"u0", "0"}});
    const double z = bihari_bound(0.0, [](double) { return 1.0; }, linear_osgood, 0.0, 1.0);
    t.add(suite, cell, "zero_start", z);
    if (z != 0.0) t.fail({suite, cell, -1, 0, "u0 = 0 returned " + num(z)});
  }
  const OsgoodModulus logm = OsgoodModulus::osgood("log", log_rho(1.0));
  for (double u0 : {1e-6, 1e-3, 1e-1}) {
    const std::string cell = cell_label({{"modulus", "log"}, {"u0", num(u0)}});
    const double b = bihari_bound(u0, [](double) { return 1.0; }, logm, 0.0, 1.0);
    const double g = u0 * std::exp(1.0);
    t.add(suite, cell, "bound_over_gronwall", b / g);
    if (!(b >= g)) t.fail({suite, cell, -1, 0, "log-modulus bound below the Gronwall bound"});
  }
  {
    const std::string cell = cell_label({{"modulus", "sqrt"}});
    bool rejected = false;
    try {
      OsgoodModulus::osgood("sqrt", [](double r) { return std::sqrt(r); });
    } catch (const DomainError&) {
      rejected = true;
    }
    t.add(suite, cell, "rejected", rejected ? 1.0 : 0.0);
    if (!rejected) t.fail({suite, cell, -1, 0, "sqrt modulus was accepted"});
  }
  return t;
}

using SuiteFn = SweepTable (*)(const SuiteConfig&);

const std::map<std::string, std::pair<SuiteFn, std::string>>& registry() {
  static const std::map<std::string, std::pair<SuiteFn, std::string>> r = {
      {"bg_ratio", {suite_bg_ratio, "hp_bound_ratio_max"}},
      {"norm_exchange", {suite_norm_exchange, "ratio_max"}},
      {"car_identity", {suite_car_identity, ""}},
      {"parity_lemma", {suite_parity_lemma, "defect_max"}},
      {"picard", {suite_picard, "residual"}},
      {"uniqueness", {suite_uniqueness, "gap"}},
      {"gronwall", {suite_gronwall, "worst_ratio"}},
      {"coeff_stability", {suite_coeff_stability, "zero_delta_distance"}},
      {"selfadjoint", {suite_selfadjoint, "max_iterate_defect"}},
      {"bihari", {suite_bihari, "linear_error"}},
  };
  return r;
}

}  // namespace

void SweepTable::add(const std::string& suite, const std::string& cell, const std::string& statistic, double value) {
  if (!std::isfinite(value)) {
    failures.push_back({suite, cell, -1, 0, "statistic " + statistic + " is not finite"});
    return;
  }
  rows.push_back({suite, cell, statistic, value});
}

void SweepTable::add_stats(const std::string& suite, const std::string& cell, const std::string& statistic,
                           std::vector<double> values) {
  if (values.empty()) return;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  add(suite, cell, statistic + "_min", *lo);
  add(suite, cell, statistic + "_max", *hi);
  add(suite, cell, statistic + "_median", median(std::move(values)));
}

void SweepTable::fail(TrialFailure failure) { failures.push_back(std::move(failure)); }

void SweepTable::append(const SweepTable& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  failures.insert(failures.end(), other.failures.begin(), other.failures.end());
}

void SweepTable::sort() {
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.suite, a.cell, a.statistic) < std::tie(b.suite, b.cell, b.statistic);
  });
  std::stable_sort(failures.begin(), failures.end(), [](const TrialFailure& a, const TrialFailure& b) {
    return std::tie(a.suite, a.cell, a.trial, a.message) < std::tie(b.suite, b.cell, b.trial, b.message);
  });
}

std::string SweepTable::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "suite,cell,statistic,value\n";
  for (const auto& r : rows) os << r.suite << ',' << r.cell << ',' << r.statistic << ',' << r.value << '\n';
  return os.str();
}

std::string SweepTable::failures_csv() const {
  std::ostringstream os;
  os << "suite,cell,trial,seed,message\n";
  for (const auto& f : failures) {
    std::string msg = f.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    os << f.suite << ',' << f.cell << ',' << f.trial << ',' << f.seed << ',' << msg << '\n';
  }
  return os.str();
}

std::string SuiteResult::summary() const {
  std::ostringstream os;
  os.precision(6);
  os << suite << (passed() ? " PASS " : " FAIL ") << worst_statistic << '=' << worst_value;
  return os.str();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"bg_ratio", "norm_exchange", "car_identity", "parity_lemma",
                                                 "picard",   "uniqueness",    "gronwall",     "coeff_stability",
                                                 "selfadjoint", "bihari"};
  return names;
}

SuiteResult run_suite(const std::string& name, const SuiteConfig& config) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw ConfigError("unknown suite '" + name + "'", "--suite");
  SuiteResult out;
  out.suite = name;
  out.table = it->second.first(config);
  out.table.sort();
  const std::string& stat = it->second.second;
  out.worst_statistic = stat.empty() ? "max_defect" : stat;
  for (const auto& row : out.table.rows)
    if (stat.empty() || row.statistic == stat) out.worst_value = std::max(out.worst_value, row.value);
  return out;
}

SweepTable run_inequality_suite(const SuiteConfig& config) {
  SweepTable t;
  for (const char* name : {"bg_ratio", "norm_exchange", "car_identity", "parity_lemma"}) t.append(run_suite(name, config).table);
  t.sort();
  return t;
}

SweepTable run_solver_suite(const SuiteConfig& config) {
  SweepTable t;
  for (const char* name : {"picard", "uniqueness", "gronwall", "coeff_stability", "selfadjoint", "bihari"})
    t.append(run_suite(name, config).table);
  t.sort();
  return t;
}

SweepTable grid_refinement_study(const std::string& label, const std::function<QsdeProblem(int)>& build,
                                 const std::vector<int>& ns, const SolveOptions& options) {
  const std::string suite = "grid_refinement";
  SweepTable t;
  for (int n : ns) {
    const std::string cell = cell_label({{"problem", label}, {"n", std::to_string(n)}});
    guarded(t, suite, cell, [&] {
      const QsdeProblem problem = build(n);
      const SolveReport r = picard_solve(problem, options);
      const TimeGrid& grid = problem.space->grid();
      for (int k = 0; k <= grid.n(); ++k)
        t.add(suite, cell + ";node=" + std::to_string(k), "lp_norm", lp_norm(r.trajectory[k], problem.p));
      t.add(suite, cell, "final_lp_norm", lp_norm(r.trajectory[grid.n()], problem.p));
      t.add(suite, cell, "adaptedness_defect", r.trajectory.adaptedness_defect());
      if (r.trajectory.adaptedness_defect() > 1e-10) t.fail({suite, cell, -1, 0, "trajectory is not adapted"});
    });
  }
  t.sort();
  return t;
}

double empirical_cp(const SpacePtr& space, const Driver& driver, double p, int trials, std::uint64_t seed) {
  Rng rng(seed);
  const int n = space->grid().n();
  double worst = 1.0;
  for (int i = 0; i < trials; ++i) {
    const AdaptedProcess f = random_adapted_process(space, n, rng);
    worst = std::max({worst, check_l2lp_bound(f, p, Side::Right, driver).ratio,
                      check_l2lp_bound(f, p, Side::Left, driver).ratio});
  }
  return worst;
}

std::string cell_label(const std::vector<std::pair<std::string, std::string>>& items) {
  std::string out;
  for (const auto& [k, v] : items) {
    if (!out.empty()) out += ';';
    out += k + '=' + v;
  }
  return out;
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace fqsde
