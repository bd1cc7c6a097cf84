#pragma once

#include <map>
#include <string>

#include "fqsde/qsde.hpp"

namespace fqsde {

/// Flat `key = value` pairs in file order; `#` starts a comment.
using ConfigMap = std::map<std::string, std::string>;

/// Throws ConfigError on malformed lines or repeated keys.
ConfigMap parse_config(const std::string& text);
ConfigMap read_config_file(const std::string& path);

struct ProblemConfig {
  QsdeProblem problem;
  SolveOptions options;
};

/// Recognized keys:
///   problem                         optional built-in problem used as the base
///   grid.t0, grid.T, grid.n         uniform grid (defaults 0, 1, 8)
///   grid.nodes                      comma-separated node list (overrides the uniform keys)
///   driver.kind                     fermion | annihilation | creation | linear
///   driver.alpha1.re/.im, driver.alpha2.re/.im
///   p                               exponent, > 2 (default 4)
///   F.name, F.<param>  (likewise G, H)
///   R.name, R.contraction, R.shift, R.mode (pointwise | initial)
///   Z.I = re [im], Z.e1e2 = re [im]  monomial coefficients of Z; Z must be scalar
///   solve.tol, solve.max_outer, solve.max_inner
/// Any other key raises ConfigError naming it.
ProblemConfig build_problem_config(const ConfigMap& config);

}  // namespace fqsde
