#pragma once

#include <vector>

#include "fqsde/clifford_element.hpp"

namespace fqsde {

/// Grid-indexed family f(tau_0), f(tau_1), ... with f(tau_k) in the node-k filtration level.
///
/// As an integrand, value k is the left-endpoint representative on [tau_k, tau_{k+1});
/// as a trajectory it holds all n + 1 node values. Adaptedness is checked on construction:
/// a value whose L^2 distance to its level algebra exceeds tol * max(1, ||f_k||_2) is
/// rejected with ContractViolation.
class AdaptedProcess {
 public:
  static constexpr double kDefaultTolerance = 1e-8;

  AdaptedProcess(SpacePtr space, std::vector<CliffordElement> values, double tol = kDefaultTolerance);

  /// count copies of a level-0 element.
  static AdaptedProcess constant(const CliffordElement& value, int count);
  static AdaptedProcess zero(const SpacePtr& space, int count);

  const CliffordSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  int size() const noexcept { return static_cast<int>(values_.size()); }
  const CliffordElement& operator[](int k) const { return values_.at(static_cast<std::size_t>(k)); }
  const std::vector<CliffordElement>& values() const noexcept { return values_; }

  /// Largest distance of a value to its level algebra.
  double adaptedness_defect() const;

 private:
  SpacePtr space_;
  std::vector<CliffordElement> values_;
};

}  // namespace fqsde
