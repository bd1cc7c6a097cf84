#include "fqsde/builtin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "fqsde/errors.hpp"

namespace fqsde {

namespace {

constexpr double kRadialFloor = 1e-14;

/// Reads the allowed parameters, rejecting anything else by full key.
class Params {
 public:
  Params(const ParamMap& params, std::set<std::string> allowed, const std::string& prefix)
      : params_(params) {
    allowed.insert("shift");
    for (const auto& [key, value] : params)
      if (!allowed.count(key)) throw ConfigError("unknown parameter '" + prefix + key + "'", prefix + key);
  }
  double get(const std::string& key, double fallback) const {
    const auto it = params_.find(key);
    return it == params_.end() ? fallback : it->second;
  }

 private:
  const ParamMap& params_;
};

double radial_profile(double u) { return u * std::sqrt(std::log(std::numbers::e + 1.0 / u)); }

}  // namespace

CoefficientMap shifted(const CoefficientMap& f, double delta) {
  if (delta == 0.0) return f;
  CoefficientMap g = f;
  g.name = f.name + "+shift";
  g.eval = [f, delta](const CliffordElement& x, double t) {
    return f(x, t) + CliffordElement::scalar(x.space_ptr(), delta);
  };
  return g;
}

NonlocalMap shifted(const NonlocalMap& r, double delta) {
  if (delta == 0.0) return r;
  NonlocalMap s = r;
  s.name = r.name + "+shift";
  s.eval = [r, delta](const CliffordElement& x) { return r(x) + CliffordElement::scalar(x.space_ptr(), delta); };
  return s;
}

std::vector<std::string> coefficient_names() {
  return {"zero", "linear", "constant", "affine", "even_part", "radial"};
}

CoefficientMap make_coefficient(const std::string& name, const ParamMap& params, double p, const std::string& prefix) {
  CoefficientMap f;
  f.name = name;
  if (name == "zero") {
    Params read(params, {}, prefix);
    return shifted(f, read.get("shift", 0.0));
  }
  if (name == "linear") {
    Params read(params, {"scale"}, prefix);
    const double a = read.get("scale", 1.0);
    f.eval = [a](const CliffordElement& x, double) { return a * x; };
    f.modulus = OsgoodModulus::lipschitz(a * a);
    f.parity_even = false;
    return shifted(f, read.get("shift", 0.0));
  }
  if (name == "constant") {
    Params read(params, {"value"}, prefix);
    const double v = read.get("value", 1.0);
    f.eval = [v](const CliffordElement& x, double) { return CliffordElement::scalar(x.space_ptr(), v); };
    return shifted(f, read.get("shift", 0.0));
  }
  if (name == "affine") {
    Params read(params, {"scale", "offset"}, prefix);
    const double a = read.get("scale", 1.0);
    const double b = read.get("offset", 0.0);
    f.eval = [a, b](const CliffordElement& x, double) { return a * x + CliffordElement::scalar(x.space_ptr(), b); };
    f.modulus = OsgoodModulus::lipschitz(a * a);
    f.parity_even = false;
    return shifted(f, read.get("shift", 0.0));
  }
  if (name == "even_part") {
    Params read(params, {"scale"}, prefix);
    const double a = read.get("scale", 1.0);
    f.eval = [a](const CliffordElement& x, double) { return a * parity_decompose(x).even; };
    f.modulus = OsgoodModulus::lipschitz(a * a);
    return shifted(f, read.get("shift", 0.0));
  }
  if (name == "radial") {
    Params read(params, {"scale"}, prefix);
    const double a = read.get("scale", 1.0);
    if (a == 0.0) throw ConfigError("radial coefficient needs a nonzero scale", prefix + "scale");
    f.eval = [a, p](const CliffordElement& x, double) {
      const double u = lp_norm(x, p);
      if (u == 0.0) return CliffordElement::zero(x.space_ptr());
      return (a * radial_profile(u) / std::max(u, kRadialFloor)) * x;
    };
    // |s'(u)| <= 2 sqrt(ln(e + 1/u)) and the ratio term contributes the same order; the
    // combined constant 4 (1 + ln 2) is bounded by 8.
    f.modulus = OsgoodModulus::osgood("radial", radial_log_rho(8.0 * a * a));
    f.parity_even = false;
    return shifted(f, read.get("shift", 0.0));
  }
  throw ConfigError("unknown coefficient '" + name + "'", prefix + "name");
}

std::vector<std::string> nonlocal_names() { return {"zero", "scaled", "state", "even_scaled"}; }

NonlocalMap make_nonlocal(const std::string& name, double c, const ParamMap& params, const std::string& prefix) {
  Params read(params, {}, prefix);
  const double shift = read.get("shift", 0.0);
  if (!(c >= 0.0 && c < 1.0))
    throw ConfigError("nonlocal contraction must lie in [0, 1), got " + std::to_string(c), prefix + "contraction");
  if (name == "zero") {
    NonlocalMap r;
    return shifted(r, shift);
  }
  if (name == "scaled")
    return shifted(NonlocalMap::make(name, [c](const CliffordElement& x) { return c * x; }, c, true), shift);
  if (name == "state")
    return shifted(NonlocalMap::make(
                       name, [c](const CliffordElement& x) { return CliffordElement::scalar(x.space_ptr(), c * state(x)); },
                       c, true),
                   shift);
  if (name == "even_scaled")
    return shifted(
        NonlocalMap::make(name, [c](const CliffordElement& x) { return c * parity_decompose(x).even; }, c, true), shift);
  throw ConfigError("unknown nonlocal map '" + name + "'", prefix + "name");
}

std::vector<std::string> builtin_problem_names() {
  return {"zero",           "linear_diffusion", "linear_drift",           "linear_mixed",    "linear_nonlocal",
          "linear_nonlocal_state", "osgood_radial", "osgood_radial_nonlocal", "selfadjoint_even"};
}

QsdeProblem make_builtin_problem(const std::string& name, const BuiltinOptions& options) {
  const SpacePtr space = make_space(TimeGrid::uniform(options.t0, options.T, options.n), options.driver.layout());
  QsdeProblem problem(space, CliffordElement::identity(space));
  problem.driver = options.driver;
  problem.p = options.p;
  problem.name = name;
  const double p = options.p;
  auto mixed = [&] {
    problem.F = make_coefficient("linear", {{"scale", 0.6}}, p);
    problem.G = make_coefficient("linear", {{"scale", 0.4}}, p);
    problem.H = make_coefficient("affine", {{"scale", -0.5}, {"offset", 0.2}}, p);
    problem.Z = CliffordElement::scalar(space, 1.5);
  };
  if (name == "zero") {
  } else if (name == "linear_diffusion") {
    problem.F = make_coefficient("linear", {}, p);
  } else if (name == "linear_drift") {
    problem.H = make_coefficient("linear", {}, p);
  } else if (name == "linear_mixed") {
    mixed();
  } else if (name == "linear_nonlocal") {
    mixed();
    problem.R = make_nonlocal("scaled", 0.5);
  } else if (name == "linear_nonlocal_state") {
    mixed();
    problem.R = make_nonlocal("state", 0.5);
  } else if (name == "osgood_radial" || name == "osgood_radial_nonlocal") {
    problem.F = make_coefficient("radial", {{"scale", 0.8}}, p);
    problem.H = make_coefficient("radial", {{"scale", 0.5}}, p);
    if (name == "osgood_radial_nonlocal") problem.R = make_nonlocal("scaled", 0.5);
  } else if (name == "selfadjoint_even") {
    problem.F = make_coefficient("even_part", {{"scale", 0.8}}, p);
    problem.G = make_coefficient("even_part", {{"scale", 0.5}}, p);
    problem.H = make_coefficient("linear", {{"scale", 0.3}}, p);
    problem.R = make_nonlocal("scaled", 0.5);
  } else {
    throw ConfigError("unknown built-in problem '" + name + "'", "problem");
  }
  problem.validate();
  return problem;
}

ModulusSample sample_modulus(const CoefficientMap& f, const SpacePtr& space, double p, Rng& rng, int samples) {
  std::uniform_real_distribution<double> scale(-6.0, 1.0);
  std::uniform_real_distribution<double> gap(-8.0, 0.5);
  const FiltrationLevel top{space->generator_count()};
  ModulusSample out;
  for (int i = 0; i < samples; ++i) {
    const CliffordElement x1 = std::pow(10.0, scale(rng)) * random_level_element(space, top, rng);
    const CliffordElement x2 = (i % 5 == 0) ? CliffordElement::zero(space)
                                            : x1 + std::pow(10.0, gap(rng)) * random_level_element(space, top, rng);
    const double d = lp_norm(x1 - x2, p);
    if (d == 0.0) continue;
    const double num = std::pow(lp_norm(f(x1, 0.0) - f(x2, 0.0), p), 2.0);
    const double bound = f.modulus(d * d);
    out.worst_ratio = std::max(out.worst_ratio, bound > 0.0 ? num / bound : (num > 0.0 ? HUGE_VAL : 0.0));
    ++out.samples;
  }
  return out;
}

double sample_contraction(const NonlocalMap& r, const SpacePtr& space, double p, Rng& rng, int samples) {
  const FiltrationLevel top{space->generator_count()};
  std::uniform_real_distribution<double> gap(-6.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const CliffordElement x1 = random_level_element(space, top, rng);
    const CliffordElement x2 = x1 + std::pow(10.0, gap(rng)) * random_level_element(space, top, rng);
    const double d = lp_norm(x1 - x2, p);
    if (d > 0.0) worst = std::max(worst, lp_norm(r(x1) - r(x2), p) / d);
  }
  return worst;
}

}  // namespace fqsde
