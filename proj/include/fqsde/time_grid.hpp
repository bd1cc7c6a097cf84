#pragma once

#include <span>
#include <vector>

namespace fqsde {

/// Partition t0 = tau_0 < tau_1 < ... < tau_n = T of the solution interval.
class TimeGrid {
 public:
  /// Equal steps (T - t0) / n. The last node is set to T exactly.
  static TimeGrid uniform(double t0, double T, int n);

  /// Arbitrary strictly increasing nodes; at least two.
  static TimeGrid from_nodes(std::vector<double> nodes);

  double t0() const noexcept { return nodes_.front(); }
  double T() const noexcept { return nodes_.back(); }
  double length() const noexcept { return T() - t0(); }
  int n() const noexcept { return static_cast<int>(nodes_.size()) - 1; }

  double node(int k) const;
  /// Delta_k = tau_{k+1} - tau_k.
  double step(int k) const;

  std::span<const double> nodes() const noexcept { return nodes_; }
  bool is_uniform(double rel_tol = 1e-12) const;

 private:
  explicit TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {}
  std::vector<double> nodes_;
};

}  // namespace fqsde
