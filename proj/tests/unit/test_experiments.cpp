#include <catch2/catch.hpp>
#include <atomic>
#include <cmath>
#include <limits>

#include "fqsde/errors.hpp"
#include "fqsde/experiments.hpp"

using namespace fqsde;

namespace {

SuiteConfig small_config() {
  SuiteConfig c;
  c.trials = 6;
  c.n_grid = {3};
  c.p_grid = {2.0, 4.0};
  c.threads = 2;
  return c;
}

double find(const SweepTable& t, const std::string& cell, const std::string& stat) {
  for (const auto& r : t.rows)
    if (r.cell == cell && r.statistic == stat) return r.value;
  FAIL("missing row " << cell << " / " << stat);
  return 0.0;
}

}  // namespace

TEST_CASE("suites are deterministic in the master seed", "[experiments]") {
  SuiteConfig c = small_config();
  const std::string a = run_suite("bg_ratio", c).table.to_csv();
  c.threads = 1;
  REQUIRE(run_suite("bg_ratio", c).table.to_csv() == a);
  c.master_seed += 1;
  REQUIRE(run_suite("bg_ratio", c).table.to_csv() != a);
}

TEST_CASE("empty grids give empty passing tables", "[experiments]") {
  SuiteConfig c = small_config();
  c.p_grid.clear();
  c.exchange_grid.clear();
  const SuiteResult bg = run_suite("bg_ratio", c);
  REQUIRE(bg.table.rows.empty());
  REQUIRE(bg.passed());
  REQUIRE(run_suite("norm_exchange", c).table.rows.empty());
  c = small_config();
  c.trials = 0;
  REQUIRE(run_suite("bg_ratio", c).table.rows.empty());
}

TEST_CASE("fermion p = 2 ratio equals one", "[experiments]") {
  const SuiteResult r = run_suite("bg_ratio", small_config());
  REQUIRE(r.passed());
  const std::string cell = cell_label({{"driver", "fermion"}, {"n", "3"}, {"p", "2"}});
  REQUIRE(find(r.table, cell, "ratio_right_max") == Approx(1.0).margin(1e-9));
  REQUIRE(find(r.table, cell, "ratio_right_min") == Approx(1.0).margin(1e-9));
  REQUIRE(find(r.table, cell, "isometry_defect_max") < 1e-9);
  REQUIRE(find(r.table, cell, "hp_bound_ratio_max") <= 1.0 + 1e-9);
  REQUIRE(find(r.table, cell, "cp_hat") >= 1.0);
}

TEST_CASE("inequality suites pass on a small grid", "[experiments]") {
  const SuiteConfig c = small_config();
  for (const std::string& name : {"norm_exchange", "car_identity", "parity_lemma"}) {
    const SuiteResult r = run_suite(name, c);
    INFO(r.summary());
    REQUIRE(r.passed());
    REQUIRE_FALSE(r.table.rows.empty());
  }
  REQUIRE(run_suite("norm_exchange", c).worst_value <= 1.0 + 1e-9);
}

TEST_CASE("solver suites pass on a small grid", "[experiments][slow]") {
  SuiteConfig c = small_config();
  c.n_grid = {4};
  for (const std::string& name : {"picard", "uniqueness", "gronwall", "selfadjoint", "bihari"}) {
    const SuiteResult r = run_suite(name, c);
    INFO(r.summary());
    for (const auto& f : r.table.failures) INFO(f.cell << ": " << f.message);
    REQUIRE(r.passed());
  }
}

TEST_CASE("grid refinement study", "[experiments]") {
  const SweepTable zero = grid_refinement_study(
      "zero", [](int n) { return make_builtin_problem("zero", BuiltinOptions{n}); }, {2, 4});
  for (const auto& row : zero.rows)
    if (row.statistic == "lp_norm") REQUIRE(row.value == Approx(1.0).epsilon(1e-14));

  const SweepTable drift = grid_refinement_study(
      "drift", [](int n) { return make_builtin_problem("linear_drift", BuiltinOptions{n}); }, {1, 4, 8});
  for (int n : {1, 4, 8}) {
    const std::string cell = cell_label({{"problem", "drift"}, {"n", std::to_string(n)}});
    REQUIRE(find(drift, cell, "final_lp_norm") == Approx(std::pow(1.0 + 1.0 / n, n)).epsilon(1e-10));
  }
  REQUIRE(find(drift, cell_label({{"problem", "drift"}, {"n", "1"}}), "final_lp_norm") == Approx(2.0));
}

TEST_CASE("sweep table bookkeeping", "[experiments]") {
  REQUIRE(cell_label({{"a", "1"}, {"b", "x"}}) == "a=1;b=x");
  REQUIRE(cell_label({}).empty());
  SweepTable t;
  t.add("s", "c", "v", std::numeric_limits<double>::quiet_NaN());
  t.add("s", "c", "w", std::numeric_limits<double>::infinity());
  REQUIRE(t.rows.empty());
  REQUIRE(t.failures.size() == 2);
  REQUIRE_FALSE(t.passed());
  t.add_stats("s", "b", "x", {3.0, 1.0, 2.0, 10.0});
  t.sort();
  REQUIRE(t.rows.size() == 3);
  REQUIRE(t.rows[0].statistic == "x_max");
  REQUIRE(t.rows[0].value == 10.0);
  REQUIRE(find(t, "b", "x_median") == 2.5);
  REQUIRE(find(t, "b", "x_min") == 1.0);
  REQUIRE(t.to_csv().rfind("suite,cell,statistic,value\n", 0) == 0);
  REQUIRE(t.failures_csv().rfind("suite,cell,trial,seed,message\n", 0) == 0);
  REQUIRE_THROWS_AS(run_suite("nope", SuiteConfig{}), ConfigError);
  REQUIRE(suite_names().size() == 10);
}

TEST_CASE("parallel_for visits every index once", "[experiments]") {
  for (int threads : {0, 1, 3, 16}) {
    std::vector<std::atomic<int>> hits(37);
    parallel_for(37, threads, [&](int i) { ++hits[static_cast<std::size_t>(i)]; });
    for (const auto& h : hits) REQUIRE(h.load() == 1);
  }
  REQUIRE_THROWS_AS(parallel_for(5, 2, [](int i) {
                      if (i == 3) throw DomainError("boom");
                    }),
                    DomainError);
}

TEST_CASE("empirical C(p) is at least one", "[experiments]") {
  const SpacePtr s = make_space(TimeGrid::uniform(0.0, 1.0, 4));
  REQUIRE(empirical_cp(s, Driver::fermion(), 2.0, 10, 1) == Approx(1.0).margin(1e-9));
  REQUIRE(empirical_cp(s, Driver::fermion(), 6.0, 10, 1) >= 1.0);
}
