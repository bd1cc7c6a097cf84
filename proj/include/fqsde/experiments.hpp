#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fqsde/builtin.hpp"
#include "fqsde/ito.hpp"

namespace fqsde {

struct SuiteConfig {
  std::uint64_t master_seed = 20240601;
  int trials = 50;
  /// Exponents for the Burkholder-Gundy sweeps.
  std::vector<double> p_grid = {2.0, 3.0, 4.0, 6.0};
  /// (q, p) pairs for the norm-exchange sweep.
  std::vector<std::pair<double, double>> exchange_grid = {{1.0, 2.0}, {2.0, 4.0}, {2.0, 7.0}};
  /// Increment counts; the pair-layout drivers are capped at max_pair_n.
  std::vector<int> n_grid = {4, 8};
  int max_pair_n = 6;
  std::vector<Driver> drivers = {Driver::fermion(), Driver::annihilation(), Driver::creation(),
                                 Driver::linear({1.0, 0.0}, {1.0, 0.0})};
  /// Picard tolerance for the solver suites.
  double tol = 1e-10;
  /// Solver exponent.
  double solver_p = 4.0;
  /// Worker threads for trial fan-out; 0 picks the hardware concurrency.
  int threads = 0;
};

struct SweepRow {
  std::string suite;
  std::string cell;  // "key=value;key=value"
  std::string statistic;
  double value = 0.0;
};

struct TrialFailure {
  std::string suite;
  std::string cell;
  int trial = -1;
  std::uint64_t seed = 0;
  std::string message;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  std::vector<TrialFailure> failures;

  /// Adds a row; a non-finite value is recorded as a failure instead.
  void add(const std::string& suite, const std::string& cell, const std::string& statistic, double value);
  /// Adds <statistic>_min, _median, _max rows.
  void add_stats(const std::string& suite, const std::string& cell, const std::string& statistic,
                 std::vector<double> values);
  void fail(TrialFailure failure);
  void append(const SweepTable& other);
  /// Sorts rows and failures into their canonical order.
  void sort();
  bool passed() const noexcept { return failures.empty(); }
  /// Header "suite,cell,statistic,value" then one line per row, fixed 17-digit precision.
  std::string to_csv() const;
  /// Header "suite,cell,trial,seed,message".
  std::string failures_csv() const;
};

struct SuiteResult {
  std::string suite;
  SweepTable table;
  std::string worst_statistic;
  double worst_value = 0.0;
  bool passed() const noexcept { return table.passed(); }
  /// "<suite> PASS|FAIL <statistic>=<value>".
  std::string summary() const;
};

/// bg_ratio, norm_exchange, car_identity, parity_lemma, picard, uniqueness, gronwall,
/// coeff_stability, selfadjoint, bihari.
const std::vector<std::string>& suite_names();
/// Throws ConfigError for an unknown name.
SuiteResult run_suite(const std::string& name, const SuiteConfig& config);

/// bg_ratio, norm_exchange, car_identity and parity_lemma.
SweepTable run_inequality_suite(const SuiteConfig& config);
/// picard, uniqueness, gronwall, coeff_stability, selfadjoint and bihari.
SweepTable run_solver_suite(const SuiteConfig& config);

/// Node norms t -> ||X_t||_p for each grid size; build(n) returns the problem on n increments.
SweepTable grid_refinement_study(const std::string& label, const std::function<QsdeProblem(int)>& build,
                                 const std::vector<int>& ns = {2, 4, 8, 12}, const SolveOptions& options = {});

/// Largest measured ||int f dxi||_p / (sum ||f_k||_p^2 Delta_k)^{1/2} over random adapted f,
/// clamped below at 1; stands in for C(p) in stability bounds.
double empirical_cp(const SpacePtr& space, const Driver& driver, double p, int trials, std::uint64_t seed);

/// Cell label for a set of key/value pairs, in the given order.
std::string cell_label(const std::vector<std::pair<std::string, std::string>>& items);

/// Runs fn(i) for i in [0, count) on up to `threads` workers; results are stored by index.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace fqsde
