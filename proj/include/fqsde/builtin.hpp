#pragma once

#include <map>
#include <string>
#include <vector>

#include "fqsde/qsde.hpp"
#include "fqsde/random.hpp"

namespace fqsde {

using ParamMap = std::map<std::string, double>;

/// Registered coefficient maps (F, G, H). Every name accepts `shift` (adds shift * I).
///   zero                      0
///   linear(scale = 1)         scale x
///   constant(value = 1)       value I
///   affine(scale = 1, offset) scale x + offset I
///   even_part(scale = 1)      scale (x + P x) / 2
///   radial(scale = 1)         scale s(||x||_p) x / max(||x||_p, 1e-14), s(u) = u sqrt(ln(e + 1/u))
/// Unknown names or parameters raise ConfigError; the key reported is prefix + name.
CoefficientMap make_coefficient(const std::string& name, const ParamMap& params, double p,
                                const std::string& prefix = "");
std::vector<std::string> coefficient_names();

/// Registered nonlocal maps, each with contraction constant c and optional `shift`:
///   zero, scaled (c x), state (c m(x) I), even_scaled (c (x + P x) / 2).
NonlocalMap make_nonlocal(const std::string& name, double contraction, const ParamMap& params = {},
                          const std::string& prefix = "");
std::vector<std::string> nonlocal_names();

/// x -> F(x, t) + delta I, with the modulus and flags of F.
CoefficientMap shifted(const CoefficientMap& f, double delta);
/// x -> R(x) + delta I, with the contraction of R.
NonlocalMap shifted(const NonlocalMap& r, double delta);

struct BuiltinOptions {
  int n = 8;
  double t0 = 0.0;
  double T = 1.0;
  Driver driver = Driver::fermion();
  double p = 4.0;
};

/// zero, linear_diffusion, linear_drift, linear_mixed, linear_nonlocal, linear_nonlocal_state,
/// osgood_radial, osgood_radial_nonlocal, selfadjoint_even.
QsdeProblem make_builtin_problem(const std::string& name, const BuiltinOptions& options = {});
std::vector<std::string> builtin_problem_names();

struct ModulusSample {
  double worst_ratio = 0.0;  // max ||F(x1) - F(x2)||_p^2 / rho(||x1 - x2||_p^2)
  int samples = 0;
};

/// Samples pairs (x1, x2) at several scales and separations in the top level of the space.
ModulusSample sample_modulus(const CoefficientMap& f, const SpacePtr& space, double p, Rng& rng, int samples = 200);

/// Largest ||R(x1) - R(x2)||_p / ||x1 - x2||_p over sampled pairs.
double sample_contraction(const NonlocalMap& r, const SpacePtr& space, double p, Rng& rng, int samples = 200);

}  // namespace fqsde
