#include "fqsde/time_grid.hpp"

#include <cmath>
#include <string>

#include "fqsde/errors.hpp"

namespace fqsde {

TimeGrid TimeGrid::uniform(double t0, double T, int n) {
  if (n < 1) throw DomainError("time grid needs n >= 1 increments, got " + std::to_string(n));
  if (!(T > t0) || !std::isfinite(t0) || !std::isfinite(T))
    throw DomainError("time grid needs finite t0 < T");
  std::vector<double> nodes(static_cast<std::size_t>(n) + 1);
  const double h = (T - t0) / n;
  for (int k = 0; k < n; ++k) nodes[k] = t0 + k * h;
  nodes[n] = T;
  return TimeGrid(std::move(nodes));
}

TimeGrid TimeGrid::from_nodes(std::vector<double> nodes) {
  if (nodes.size() < 2) throw DomainError("time grid needs at least two nodes");
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (!std::isfinite(nodes[k])) throw DomainError("time grid node is not finite");
    if (k > 0 && !(nodes[k] > nodes[k - 1]))
      throw DomainError("time grid nodes must be strictly increasing (node " + std::to_string(k) + ")");
  }
  return TimeGrid(std::move(nodes));
}

double TimeGrid::node(int k) const {
  if (k < 0 || k > n()) throw DomainError("node index " + std::to_string(k) + " out of range");
  return nodes_[k];
}

double TimeGrid::step(int k) const {
  if (k < 0 || k >= n()) throw DomainError("increment index " + std::to_string(k) + " out of range");
  return nodes_[k + 1] - nodes_[k];
}

bool TimeGrid::is_uniform(double rel_tol) const {
  const double h = length() / n();
  for (int k = 0; k < n(); ++k)
    if (std::abs(step(k) - h) > rel_tol * h) return false;
  return true;
}

}  // namespace fqsde
