#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fqsde/adapted_process.hpp"
#include "fqsde/driver.hpp"
#include "fqsde/modulus.hpp"

namespace fqsde {

using Trajectory = std::vector<CliffordElement>;
using CoefficientFn = std::function<CliffordElement(const CliffordElement& x, double t)>;
using ElementMap = std::function<CliffordElement(const CliffordElement& x)>;

/// One of F, G, H. The flags describe structural properties the map promises.
struct CoefficientMap {
  std::string name = "zero";
  CoefficientFn eval;  // empty means identically zero
  OsgoodModulus modulus = OsgoodModulus::lipschitz(0.0);
  bool parity_even = true;
  bool selfadjoint_preserving = true;

  bool is_zero() const noexcept { return !eval; }
  CliffordElement operator()(const CliffordElement& x, double t) const;
};

/// Nonlocal term R with ||R(x1) - R(x2)||_p <= contraction ||x1 - x2||_p.
struct NonlocalMap {
  std::string name = "zero";
  ElementMap eval;  // empty means identically zero
  double contraction = 0.0;
  bool selfadjoint_preserving = true;

  /// Throws DomainError unless 0 <= contraction < 1.
  static NonlocalMap make(std::string name, ElementMap eval, double contraction, bool selfadjoint_preserving);

  bool is_zero() const noexcept { return !eval; }
  CliffordElement operator()(const CliffordElement& x) const;
};

/// Where the nonlocal term acts: on X_t at every node, or on X_{t0} only.
enum class NonlocalMode { Pointwise, InitialOnly };

/// dX = F(X,t) dxi + dxi* G(X,t) + H(X,t) dt with X_t = Z + R(X_t) + integrals.
///
/// For the fermion field dxi = dxi* = dW; for the annihilation driver the right
/// increment is dA and the left one dA*.
struct QsdeProblem {
  QsdeProblem(SpacePtr space, CliffordElement z) : space(std::move(space)), Z(std::move(z)) {}

  SpacePtr space;
  CliffordElement Z;
  Driver driver = Driver::fermion();
  double p = 4.0;
  CoefficientMap F;
  CoefficientMap G;
  CoefficientMap H;
  NonlocalMap R;
  NonlocalMode mode = NonlocalMode::Pointwise;
  std::string name = "problem";

  /// Throws ConfigError/DomainError/ContractViolation when an invariant fails.
  void validate() const;
  /// Joint modulus of (F, G, H).
  OsgoodModulus modulus() const;
};

struct SolveOptions {
  double tol = 1e-10;
  int max_outer = 60;
  int max_inner = 500;
  /// X^(0); the constant-Z trajectory when empty.
  std::optional<Trajectory> initial;
  /// Called after every Picard iterate with (iteration, X^(iteration)).
  std::function<void(int, const Trajectory&)> observer;
};

struct SolveReport {
  AdaptedProcess trajectory;
  int picard_iterations = 0;
  /// sup_t ||X^(n+1)_t - X^(n)_t||_p per outer iteration.
  std::vector<double> deltas;
  /// Largest inner iteration count per outer iteration.
  std::vector<int> inner_iterations;
  double max_contraction_rate = 0.0;
  double max_iterate_adaptedness_defect = 0.0;
  double residual = 0.0;
};

struct InnerSolveResult {
  CliffordElement value;
  int iterations = 0;
  double max_rate = 0.0;
  double first_step = 0.0;
};

/// Solves Y = Z + R(Y) + M by Banach iteration from `start` (default Z + M).
/// Stops once a step is below tol (1 - C(R)); the returned Y then has residual < tol.
/// Throws ContractViolation when a measured step ratio exceeds C(R) + 1e-6 or the
/// iteration budget runs out.
InnerSolveResult inner_fixed_point(const CliffordElement& M, const NonlocalMap& R, const CliffordElement& Z,
                                   double tol, int max_inner, double p,
                                   const std::optional<CliffordElement>& start = std::nullopt);

/// Picard iteration X^(n+1)_t = Z + R(X^(n+1)_t) + integrals of X^(n). Throws
/// NonConvergence (with the delta trace) when max_outer is exhausted.
SolveReport picard_solve(const QsdeProblem& problem, const SolveOptions& options = {});

/// Explicit recursion X_{k+1} = X_k + F dxi_k + dxi*_k G + H Delta_k; needs R = 0.
Trajectory forward_euler_oracle(const QsdeProblem& problem);

/// L^p defect of the integral equation at every node.
std::vector<double> node_residuals(const Trajectory& trajectory, const QsdeProblem& problem);
/// sup over nodes of node_residuals.
double residual(const Trajectory& trajectory, const QsdeProblem& problem);

/// sup_t distance between the Picard limits from X^(0) = 0 and from a random adapted start.
double uniqueness_probe(const QsdeProblem& problem, double tol, std::uint64_t seed = 1);

struct StabilityCurves {
  std::vector<double> times;
  std::vector<double> lhs;  // ||X_t - Y_t||_p^2
  std::vector<double> rhs;  // Gronwall bound
  double rate = 0.0;        // C(p, T, R, L)
  double prefactor = 0.0;   // 4 / (1 - C(R))^2
  double worst_ratio = 0.0; // max lhs / rhs
  bool dominated = false;
};

/// Solves from Z and Z' and compares ||X_t - Y_t||_p^2 against
/// 4/(1-C(R))^2 exp(C (t - t0)) ||Z - Z'||_p^2, C = 4/(1-C(R))^2 max(C(p)^2, C(T)^2) L,
/// C(T) = sqrt(T - t0). Requires a Lipschitz modulus.
StabilityCurves stability_experiment(const QsdeProblem& problem, const CliffordElement& z, const CliffordElement& z_prime,
                                     double empirical_cp, const SolveOptions& options = {});

struct CoefficientStabilityRow {
  int index = 0;
  double delta = 0.0;
  double sup_distance = 0.0;
};

struct CoefficientStabilityTable {
  std::vector<CoefficientStabilityRow> rows;
  bool monotone_decreasing = false;
};

/// sup_t ||X_n(t) - X(t)||_p for each perturbed problem (same space and driver).
CoefficientStabilityTable coefficient_stability_experiment(const QsdeProblem& base,
                                                           const std::vector<QsdeProblem>& perturbed,
                                                           const std::vector<double>& deltas,
                                                           const SolveOptions& options = {});

struct SelfAdjointCheck {
  double max_iterate_defect = 0.0;      // max_n,t ||X^(n)_t - X^(n)_t*||_p
  double integral_exchange_defect = 0.0; // || int F dW - int dW F ||_op for the final integrands
  int iterations = 0;
};

/// Needs Z = Z*, even self-adjoint-preserving F and G, self-adjoint-preserving H and R,
/// and the fermion driver; otherwise ContractViolation.
SelfAdjointCheck selfadjoint_solve_check(const QsdeProblem& problem, const SolveOptions& options = {});

}  // namespace fqsde
