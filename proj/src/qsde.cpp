#include "fqsde/qsde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fqsde/errors.hpp"
#include "fqsde/ito.hpp"
#include "fqsde/random.hpp"

namespace fqsde {

namespace {

/// Step ratios are meaningful only well above roundoff.
constexpr double kRateFloor = 1e-8;
constexpr double kRateSlack = 1e-6;
constexpr double kAdaptedTol = 1e-8;

struct Increments {
  std::vector<CliffordElement> right;
  std::vector<CliffordElement> left;
};

Increments build_increments(const QsdeProblem& problem) {
  Increments inc;
  const Driver left = problem.driver.adjoint();
  for (int k = 0; k < problem.space->grid().n(); ++k) {
    inc.right.push_back(driver_increment(problem.space, problem.driver, k));
    inc.left.push_back(driver_increment(problem.space, left, k));
  }
  return inc;
}

void require_adapted(const CliffordElement& v, FiltrationLevel level, const std::string& what, int k) {
  const double defect = level_defect(v, level);
  if (defect > kAdaptedTol * std::max(1.0, lp_norm(v, 2.0)))
    throw ContractViolation(what + " is not adapted at node " + std::to_string(k) + " (defect " +
                            std::to_string(defect) + ")");
}

/// M_0 = 0, M_{k+1} = M_k + F(X_k) dxi_k + dxi*_k G(X_k) + H(X_k) Delta_k.
Trajectory drive_path(const QsdeProblem& problem, const Increments& inc, const Trajectory& x, bool check) {
  const SpacePtr& space = problem.space;
  const TimeGrid& grid = space->grid();
  Trajectory m;
  m.reserve(x.size());
  m.push_back(CliffordElement::zero(space));
  for (int k = 0; k < grid.n(); ++k) {
    const double t = grid.node(k);
    CliffordElement next = m.back();
    if (!problem.F.is_zero()) {
      const CliffordElement f = problem.F(x[k], t);
      if (check) require_adapted(f, space->node_level(k), "coefficient F", k);
      next += f * inc.right[k];
    }
    if (!problem.G.is_zero()) {
      const CliffordElement g = problem.G(x[k], t);
      if (check) require_adapted(g, space->node_level(k), "coefficient G", k);
      next += inc.left[k] * g;
    }
    if (!problem.H.is_zero()) {
      const CliffordElement h = problem.H(x[k], t);
      if (check) require_adapted(h, space->node_level(k), "coefficient H", k);
      next += grid.step(k) * h;
    }
    m.push_back(std::move(next));
  }
  return m;
}

double sup_distance(const Trajectory& a, const Trajectory& b, double p) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, lp_norm(a[k] - b[k], p));
  return worst;
}

void require_trajectory_shape(const Trajectory& x, const QsdeProblem& problem) {
  if (x.size() != static_cast<std::size_t>(problem.space->grid().n()) + 1)
    throw DomainError("trajectory must hold one value per grid node");
  for (const auto& v : x)
    if (v.space_ptr() != problem.space) throw DomainError("trajectory value belongs to another space");
}

}  // namespace

CliffordElement CoefficientMap::operator()(const CliffordElement& x, double t) const {
  return eval ? eval(x, t) : CliffordElement::zero(x.space_ptr());
}

NonlocalMap NonlocalMap::make(std::string name, ElementMap eval, double contraction, bool selfadjoint_preserving) {
  if (!(contraction >= 0.0 && contraction < 1.0))
    throw DomainError("nonlocal map '" + name + "' needs contraction in [0, 1), got " + std::to_string(contraction));
  NonlocalMap r;
  r.name = std::move(name);
  r.eval = std::move(eval);
  r.contraction = contraction;
  r.selfadjoint_preserving = selfadjoint_preserving;
  return r;
}

CliffordElement NonlocalMap::operator()(const CliffordElement& x) const {
  return eval ? eval(x) : CliffordElement::zero(x.space_ptr());
}

void QsdeProblem::validate() const {
  if (!space) throw DomainError("problem needs a space");
  if (Z.space_ptr() != space) throw DomainError("initial datum Z belongs to another space");
  if (!(p > 2.0)) throw DomainError("problem exponent must satisfy p > 2, got " + std::to_string(p));
  if (driver.layout() != space->layout())
    throw ConfigError("driver '" + driver.name() + "' does not match the space layout", "driver.kind");
  if (!(R.contraction >= 0.0 && R.contraction < 1.0))
    throw DomainError("nonlocal contraction must lie in [0, 1)");
  const double defect = level_defect(Z, {0});
  if (defect > 1e-12 * std::max(1.0, lp_norm(Z, 2.0)))
    throw ContractViolation("initial datum Z is not in the initial algebra (defect " + std::to_string(defect) + ")");
}

OsgoodModulus QsdeProblem::modulus() const { return F.modulus + G.modulus + H.modulus; }

InnerSolveResult inner_fixed_point(const CliffordElement& M, const NonlocalMap& R, const CliffordElement& Z,
                                   double tol, int max_inner, double p,
                                   const std::optional<CliffordElement>& start) {
  if (!(tol > 0.0)) throw DomainError("inner tolerance must be positive");
  if (R.is_zero()) {
    CliffordElement y = Z + M;
    const double first = start ? lp_norm(y - *start, p) : 0.0;
    return {std::move(y), 1, 0.0, first};
  }
  const double c = R.contraction;
  if (!(c < 1.0)) throw ContractViolation("nonlocal map is not a strict contraction");
  CliffordElement y = start ? *start : Z + M;
  double prev_step = -1.0;
  InnerSolveResult out{y, 0, 0.0, 0.0};
  for (int it = 1; it <= max_inner; ++it) {
    CliffordElement next = Z + R(y) + M;
    const double step = lp_norm(next - y, p);
    if (it == 1) out.first_step = step;
    const double floor = kRateFloor * (1.0 + lp_norm(next, p));
    if (prev_step > floor && step > 0.0) {
      const double rate = step / prev_step;
      out.max_rate = std::max(out.max_rate, rate);
      if (rate > c + kRateSlack)
        throw ContractViolation("nonlocal map '" + R.name + "' contracts at measured rate " + std::to_string(rate) +
                                " above its declared constant " + std::to_string(c));
    }
    y = std::move(next);
    if (step <= tol * (1.0 - c)) {
      out.value = std::move(y);
      out.iterations = it;
      return out;
    }
    prev_step = step;
  }
  throw ContractViolation("inner fixed point for '" + R.name + "' stalled after " + std::to_string(max_inner) +
                          " iterations");
}

SolveReport picard_solve(const QsdeProblem& problem, const SolveOptions& options) {
  problem.validate();
  if (!(options.tol > 0.0)) throw DomainError("Picard tolerance must be positive");
  if (options.max_outer < 1) throw DomainError("max_outer must be at least 1");
  const SpacePtr& space = problem.space;
  const int n = space->grid().n();
  const double c = problem.R.contraction;
  const double inner_tol = options.tol * (1.0 - c) / 10.0;
  const Increments inc = build_increments(problem);

  Trajectory x = options.initial ? *options.initial
                                 : Trajectory(static_cast<std::size_t>(n) + 1, problem.Z);
  require_trajectory_shape(x, problem);

  std::optional<CliffordElement> initial_value;
  double max_rate = 0.0;
  if (problem.mode == NonlocalMode::InitialOnly) {
    InnerSolveResult r0 = inner_fixed_point(CliffordElement::zero(space), problem.R, problem.Z, inner_tol,
                                            options.max_inner, problem.p);
    max_rate = r0.max_rate;
    initial_value = std::move(r0.value);
  }

  std::vector<double> deltas;
  std::vector<int> inner_counts;
  double max_adapted = 0.0;
  bool converged = false;
  int iteration = 0;
  while (iteration < options.max_outer) {
    ++iteration;
    const Trajectory m = drive_path(problem, inc, x, iteration == 1);
    Trajectory next;
    next.reserve(x.size());
    int inner_max = 0;
    for (int k = 0; k <= n; ++k) {
      if (problem.mode == NonlocalMode::InitialOnly) {
        next.push_back(*initial_value + m[k]);
        continue;
      }
      InnerSolveResult r = inner_fixed_point(m[k], problem.R, problem.Z, inner_tol, options.max_inner,
                                             problem.p, x[k]);
      inner_max = std::max(inner_max, r.iterations);
      max_rate = std::max(max_rate, r.max_rate);
      next.push_back(std::move(r.value));
    }
    for (int k = 0; k <= n; ++k) max_adapted = std::max(max_adapted, level_defect(next[k], space->node_level(k)));
    const double delta = sup_distance(next, x, problem.p);
    deltas.push_back(delta);
    inner_counts.push_back(inner_max);
    x = std::move(next);
    if (options.observer) options.observer(iteration, x);
    if (delta < options.tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NonConvergence("Picard iteration did not reach tol " + std::to_string(options.tol) + " within " +
                             std::to_string(options.max_outer) + " iterations",
                         deltas);

  const double res = residual(x, problem);
  SolveReport report{AdaptedProcess(space, x), iteration, std::move(deltas), std::move(inner_counts),
                     max_rate, max_adapted, res};
  return report;
}

Trajectory forward_euler_oracle(const QsdeProblem& problem) {
  problem.validate();
  if (!problem.R.is_zero()) throw DomainError("forward Euler oracle needs R = 0");
  const SpacePtr& space = problem.space;
  const TimeGrid& grid = space->grid();
  const Driver left = problem.driver.adjoint();
  Trajectory x;
  x.push_back(problem.Z);
  for (int k = 0; k < grid.n(); ++k) {
    const double t = grid.node(k);
    const CliffordElement& xk = x.back();
    CliffordElement next = xk + problem.F(xk, t) * driver_increment(space, problem.driver, k) +
                           driver_increment(space, left, k) * problem.G(xk, t) + grid.step(k) * problem.H(xk, t);
    x.push_back(std::move(next));
  }
  return x;
}

std::vector<double> node_residuals(const Trajectory& trajectory, const QsdeProblem& problem) {
  problem.validate();
  require_trajectory_shape(trajectory, problem);
  const Increments inc = build_increments(problem);
  const Trajectory m = drive_path(problem, inc, trajectory, false);
  const CliffordElement r0 = problem.R(trajectory.front());
  std::vector<double> out;
  out.reserve(trajectory.size());
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const CliffordElement& xk = trajectory[k];
    const CliffordElement rk = problem.mode == NonlocalMode::Pointwise ? problem.R(xk) : r0;
    out.push_back(lp_norm(xk - problem.Z - rk - m[k], problem.p));
  }
  return out;
}

double residual(const Trajectory& trajectory, const QsdeProblem& problem) {
  const std::vector<double> r = node_residuals(trajectory, problem);
  return *std::max_element(r.begin(), r.end());
}

double uniqueness_probe(const QsdeProblem& problem, double tol, std::uint64_t seed) {
  const int nodes = problem.space->grid().n() + 1;
  SolveOptions a;
  a.tol = tol;
  a.initial = Trajectory(static_cast<std::size_t>(nodes), CliffordElement::zero(problem.space));
  SolveOptions b;
  b.tol = tol;
  Rng rng(seed);
  b.initial = random_adapted_process(problem.space, nodes, rng).values();
  const SolveReport ra = picard_solve(problem, a);
  const SolveReport rb = picard_solve(problem, b);
  return sup_distance(ra.trajectory.values(), rb.trajectory.values(), problem.p);
}

StabilityCurves stability_experiment(const QsdeProblem& problem, const CliffordElement& z, const CliffordElement& z_prime,
                                     double empirical_cp, const SolveOptions& options) {
  const OsgoodModulus mod = problem.modulus();
  if (!mod.is_lipschitz()) throw DomainError("stability experiment needs Lipschitz coefficients");
  if (!(empirical_cp > 0.0)) throw DomainError("stability experiment needs a positive C(p)");
  QsdeProblem px = problem;
  px.Z = z;
  QsdeProblem py = problem;
  py.Z = z_prime;
  const SolveReport rx = picard_solve(px, options);
  const SolveReport ry = picard_solve(py, options);

  const TimeGrid& grid = problem.space->grid();
  const double c = problem.R.contraction;
  StabilityCurves out;
  out.prefactor = 4.0 / ((1.0 - c) * (1.0 - c));
  const double ct = std::sqrt(grid.length());
  out.rate = out.prefactor * std::max(empirical_cp * empirical_cp, ct * ct) * mod.lipschitz_constant();
  const double dz = lp_norm(z - z_prime, problem.p);
  out.dominated = true;
  for (int k = 0; k <= grid.n(); ++k) {
    const double t = grid.node(k);
    const double d = lp_norm(rx.trajectory[k] - ry.trajectory[k], problem.p);
    const double lhs = d * d;
    const double rhs = out.prefactor * std::exp(out.rate * (t - grid.t0())) * dz * dz;
    out.times.push_back(t);
    out.lhs.push_back(lhs);
    out.rhs.push_back(rhs);
    if (lhs > rhs) out.dominated = false;
    if (rhs > 0.0) out.worst_ratio = std::max(out.worst_ratio, lhs / rhs);
  }
  return out;
}

CoefficientStabilityTable coefficient_stability_experiment(const QsdeProblem& base,
                                                           const std::vector<QsdeProblem>& perturbed,
                                                           const std::vector<double>& deltas,
                                                           const SolveOptions& options) {
  if (perturbed.size() != deltas.size()) throw DomainError("one delta per perturbed problem");
  const SolveReport reference = picard_solve(base, options);
  CoefficientStabilityTable table;
  table.monotone_decreasing = true;
  for (std::size_t i = 0; i < perturbed.size(); ++i) {
    if (perturbed[i].space != base.space) throw DomainError("perturbed problem must share the base space");
    const SolveReport r = picard_solve(perturbed[i], options);
    CoefficientStabilityRow row;
    row.index = static_cast<int>(i) + 1;
    row.delta = deltas[i];
    row.sup_distance = sup_distance(r.trajectory.values(), reference.trajectory.values(), base.p);
    if (!table.rows.empty() && !(row.sup_distance < table.rows.back().sup_distance)) table.monotone_decreasing = false;
    table.rows.push_back(row);
  }
  return table;
}

SelfAdjointCheck selfadjoint_solve_check(const QsdeProblem& problem, const SolveOptions& options) {
  problem.validate();
  if (problem.driver.kind != DriverKind::FermionField)
    throw ContractViolation("self-adjointness check needs the fermion-field driver");
  if (op_norm(problem.Z - problem.Z.adjoint()) > 1e-12 * std::max(1.0, op_norm(problem.Z)))
    throw ContractViolation("self-adjointness check needs Z = Z*");
  if (!(problem.F.parity_even && problem.F.selfadjoint_preserving && problem.G.parity_even &&
        problem.G.selfadjoint_preserving))
    throw ContractViolation("self-adjointness check needs even, self-adjoint-preserving F and G");
  if (!problem.H.selfadjoint_preserving || !problem.R.selfadjoint_preserving)
    throw ContractViolation("self-adjointness check needs self-adjoint-preserving H and R");

  SelfAdjointCheck out;
  auto defect = [&](const Trajectory& x) {
    double worst = 0.0;
    for (const auto& v : x) worst = std::max(worst, lp_norm(v - v.adjoint(), problem.p));
    return worst;
  };
  SolveOptions opts = options;
  const Trajectory x0 = opts.initial ? *opts.initial
                                     : Trajectory(static_cast<std::size_t>(problem.space->grid().n()) + 1, problem.Z);
  out.max_iterate_defect = defect(x0);
  auto user_observer = options.observer;
  opts.observer = [&](int it, const Trajectory& x) {
    out.max_iterate_defect = std::max(out.max_iterate_defect, defect(x));
    if (user_observer) user_observer(it, x);
  };
  const SolveReport report = picard_solve(problem, opts);
  out.iterations = report.picard_iterations;

  const TimeGrid& grid = problem.space->grid();
  for (const CoefficientMap* coef : {&problem.F, &problem.G}) {
    std::vector<CliffordElement> values;
    for (int k = 0; k < grid.n(); ++k) values.push_back((*coef)(report.trajectory[k], grid.node(k)));
    const AdaptedProcess f(problem.space, std::move(values));
    out.integral_exchange_defect =
        std::max(out.integral_exchange_defect, op_norm(right_integral(f, grid.n()) - left_integral(f, grid.n())));
  }
  return out;
}

}  // namespace fqsde
