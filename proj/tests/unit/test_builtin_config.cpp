#include <catch2/catch.hpp>
#include <algorithm>

#include "fqsde/builtin.hpp"
#include "fqsde/config.hpp"
#include "fqsde/errors.hpp"

using namespace fqsde;

namespace {

std::string config_path(const std::string& name) { return std::string(FQSDE_CONFIG_DIR) + "/" + name; }

std::string error_key(const std::string& text) {
  try {
    build_problem_config(parse_config(text));
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("config parser", "[config]") {
  const ConfigMap m = parse_config("# comment\n  a = 1  \nb=two words # trailing\n\n");
  REQUIRE(m.size() == 2);
  REQUIRE(m.at("a") == "1");
  REQUIRE(m.at("b") == "two words");
  REQUIRE_THROWS_AS(parse_config("no equals sign"), ConfigError);
  REQUIRE_THROWS_AS(parse_config("a = 1\na = 2"), ConfigError);
  REQUIRE_THROWS_AS(parse_config("a ="), ConfigError);
  REQUIRE_THROWS_AS(read_config_file("/nonexistent/x.qsde"), ConfigError);
}

TEST_CASE("config errors name the offending key", "[config]") {
  REQUIRE(error_key("grid.n = 4\nbogus = 1") == "bogus");
  REQUIRE(error_key("F.scale = 2") == "F.scale");
  REQUIRE(error_key("F.name = linear\nF.slope = 2") == "F.slope");
  REQUIRE(error_key("F.name = cubic") == "F.name");
  REQUIRE(error_key("grid.n = 4\nZ.e1 = 1") == "Z.e1");
  REQUIRE(error_key("Z.I = 1 2 3") == "Z.I");
  REQUIRE(error_key("Z.x3 = 1") == "Z.x3");
  REQUIRE(error_key("p = 2") == "p");
  REQUIRE(error_key("driver.kind = fermion\ndriver.alpha1.re = 1") == "driver.alpha1.re");
  REQUIRE(error_key("driver.kind = qubit") == "driver.kind");
  REQUIRE(error_key("R.name = scaled\nR.contraction = 1") == "R.contraction");
  REQUIRE(error_key("R.contraction = 0.5") == "R.contraction");
  REQUIRE(error_key("R.name = scaled\nR.mode = later") == "R.mode");
  REQUIRE(error_key("grid.n = 0") == "grid.n");
  REQUIRE(error_key("grid.nodes = 0, 0.5, 0.25") == "grid.nodes");
  REQUIRE(error_key("grid.n = 2.5") == "grid.n");
  REQUIRE(error_key("solve.tol = 0") == "solve.tol");
  REQUIRE(error_key("problem = nope") == "problem");
  REQUIRE(error_key("problem = zero\ngrid.nodes = 0, 0.3, 1") == "grid.nodes");
}

TEST_CASE("config builds the described problem", "[config]") {
  const ProblemConfig pc = build_problem_config(parse_config(
      "grid.nodes = 0, 0.25, 1\ndriver.kind = linear\ndriver.alpha2.im = 0.5\np = 3\n"
      "F.name = affine\nF.scale = 2\nF.offset = 1\nR.name = state\nR.contraction = 0.25\nR.mode = initial\n"
      "Z.I = 1 0.5\nsolve.max_outer = 7\n"));
  const QsdeProblem& p = pc.problem;
  REQUIRE(p.space->grid().n() == 2);
  REQUIRE(p.space->grid().step(1) == Approx(0.75));
  REQUIRE(p.driver.kind == DriverKind::LinearCombination);
  REQUIRE(p.driver.alpha1 == Complex(1.0, 0.0));
  REQUIRE(p.driver.alpha2 == Complex(0.0, 0.5));
  REQUIRE(p.space->layout() == IncrementLayout::MajoranaPair);
  REQUIRE(p.p == 3.0);
  REQUIRE(p.mode == NonlocalMode::InitialOnly);
  REQUIRE(p.R.contraction == 0.25);
  REQUIRE(state(p.Z) == Complex(1.0, 0.5));
  REQUIRE(pc.options.max_outer == 7);
  const CliffordElement I = CliffordElement::identity(p.space);
  REQUIRE(op_norm(p.F(I, 0.0) - 3.0 * I) < 1e-15);
  REQUIRE(p.G.is_zero());
  REQUIRE(p.F.modulus.lipschitz_constant() == 4.0);
}

TEST_CASE("config can start from a built-in problem", "[config]") {
  const ProblemConfig pc = build_problem_config(parse_config("problem = linear_mixed\ngrid.n = 3\nR.name = scaled\nR.contraction = 0.5"));
  REQUIRE(pc.problem.space->grid().n() == 3);
  REQUIRE(pc.problem.F.name.find("linear") != std::string::npos);
  REQUIRE(pc.problem.R.contraction == 0.5);
  REQUIRE(state(pc.problem.Z) == Complex(1.5, 0.0));
}

TEST_CASE("shipped configuration files solve", "[config]") {
  for (const std::string& name : {"zero.qsde", "linear_nonlocal.qsde", "osgood_radial.qsde", "annihilation.qsde"}) {
    INFO(name);
    const ProblemConfig pc = build_problem_config(read_config_file(config_path(name)));
    const SolveReport r = picard_solve(pc.problem, pc.options);
    REQUIRE(r.residual < 1e-6);
  }
}

TEST_CASE("coefficient registry", "[builtin]") {
  const SpacePtr s = make_space(TimeGrid::uniform(0.0, 1.0, 4));
  const CliffordElement e1 = CliffordElement::generator(s, 1);
  const CliffordElement e12 = e1 * CliffordElement::generator(s, 2);
  const CliffordElement I = CliffordElement::identity(s);
  const CliffordElement x = I + e1 + e12;

  REQUIRE(make_coefficient("zero", {}, 4.0).is_zero());
  REQUIRE(op_norm(make_coefficient("linear", {{"scale", 2.0}}, 4.0)(x, 0.0) - 2.0 * x) < 1e-15);
  REQUIRE(op_norm(make_coefficient("constant", {{"value", 3.0}}, 4.0)(x, 0.0) - 3.0 * I) < 1e-15);
  REQUIRE(op_norm(make_coefficient("even_part", {}, 4.0)(x, 0.0) - (I + e12)) < 1e-15);
  REQUIRE(op_norm(make_coefficient("linear", {{"shift", 0.5}}, 4.0)(x, 0.0) - (x + 0.5 * I)) < 1e-15);
  REQUIRE(make_coefficient("even_part", {}, 4.0).parity_even);
  REQUIRE_FALSE(make_coefficient("linear", {}, 4.0).parity_even);

  const CoefficientMap rad = make_coefficient("radial", {{"scale", 0.5}}, 4.0);
  REQUIRE_FALSE(rad.modulus.is_lipschitz());
  const double u = lp_norm(x, 4.0);
  REQUIRE(lp_norm(rad(x, 0.0), 4.0) == Approx(0.5 * u * std::sqrt(std::log(std::exp(1.0) + 1.0 / u))).epsilon(1e-12));
  REQUIRE(lp_norm(rad(CliffordElement::zero(s), 0.0), 4.0) == 0.0);

  try {
    make_coefficient("linear", {{"slope", 1.0}}, 4.0, "F.");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.key() == "F.slope");
  }
  REQUIRE_THROWS_AS(make_coefficient("radial", {{"scale", 0.0}}, 4.0), ConfigError);
  REQUIRE_THROWS_AS(make_coefficient("quartic", {}, 4.0), ConfigError);
  REQUIRE(coefficient_names().size() == 6);
}

TEST_CASE("nonlocal registry and shifts", "[builtin]") {
  const SpacePtr s = make_space(TimeGrid::uniform(0.0, 1.0, 4));
  const CliffordElement I = CliffordElement::identity(s);
  const CliffordElement e1 = CliffordElement::generator(s, 1);
  REQUIRE(make_nonlocal("zero", 0.0).is_zero());
  REQUIRE(op_norm(make_nonlocal("state", 0.5)(2.0 * I + e1) - I) < 1e-15);
  REQUIRE(op_norm(make_nonlocal("even_scaled", 0.5)(2.0 * I + e1) - I) < 1e-15);
  REQUIRE(op_norm(make_nonlocal("scaled", 0.5, {{"shift", 1.0}})(e1) - (0.5 * e1 + I)) < 1e-15);
  REQUIRE_THROWS_AS(make_nonlocal("scaled", 1.0), ConfigError);
  REQUIRE_THROWS_AS(make_nonlocal("scaled", -0.1), ConfigError);
  REQUIRE_THROWS_AS(make_nonlocal("sideways", 0.2), ConfigError);
  REQUIRE(nonlocal_names().size() == 4);

  const CoefficientMap f = make_coefficient("linear", {}, 4.0);
  REQUIRE(op_norm(shifted(f, 0.25)(e1, 0.0) - (e1 + 0.25 * I)) < 1e-15);
  REQUIRE(shifted(f, 0.25).modulus.lipschitz_constant() == f.modulus.lipschitz_constant());
  const NonlocalMap r = make_nonlocal("scaled", 0.3);
  REQUIRE(op_norm(shifted(r, 0.5)(e1) - (0.3 * e1 + 0.5 * I)) < 1e-15);
  REQUIRE(op_norm(shifted(r, 0.0)(e1) - r(e1)) == 0.0);
}

TEST_CASE("built-in problems validate and declare honest constants", "[builtin][property]") {
  Rng rng(7);
  for (const std::string& name : builtin_problem_names()) {
    INFO(name);
    const QsdeProblem p = make_builtin_problem(name, BuiltinOptions{4});
    REQUIRE_NOTHROW(p.validate());
    for (const CoefficientMap* c : {&p.F, &p.G, &p.H})
      if (!c->is_zero()) REQUIRE(sample_modulus(*c, p.space, p.p, rng, 100).worst_ratio <= 1.0 + 1e-6);
    if (!p.R.is_zero()) REQUIRE(sample_contraction(p.R, p.space, p.p, rng, 100) <= p.R.contraction + 1e-6);
  }
  REQUIRE(builtin_problem_names().size() == 9);
  try {
    make_builtin_problem("nope");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.key() == "problem");
  }
}

TEST_CASE("sample_contraction measures the actual rate", "[builtin]") {
  const SpacePtr s = make_space(TimeGrid::uniform(0.0, 1.0, 4));
  Rng rng(3);
  const double measured = sample_contraction(make_nonlocal("scaled", 0.4), s, 4.0, rng, 50);
  REQUIRE(measured == Approx(0.4).epsilon(1e-6));
  REQUIRE(sample_contraction(make_nonlocal("state", 0.4), s, 4.0, rng, 50) <= 0.4 + 1e-6);
}
