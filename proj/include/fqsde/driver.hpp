#pragma once

#include <string>

#include "fqsde/clifford_element.hpp"

namespace fqsde {

enum class DriverKind { FermionField, Annihilation, Creation, LinearCombination };

/// Noise driving an integral: W, A, A*, or xi = alpha1 A + alpha2 A* (u = 1).
struct Driver {
  DriverKind kind = DriverKind::FermionField;
  Complex alpha1{1.0, 0.0};
  Complex alpha2{0.0, 0.0};

  static Driver fermion() { return {}; }
  static Driver annihilation() { return {DriverKind::Annihilation}; }
  static Driver creation() { return {DriverKind::Creation}; }
  static Driver linear(Complex a1, Complex a2) { return {DriverKind::LinearCombination, a1, a2}; }

  IncrementLayout layout() const noexcept {
    return kind == DriverKind::FermionField ? IncrementLayout::Single : IncrementLayout::MajoranaPair;
  }
  /// Driver whose increments are the adjoints of this one's.
  Driver adjoint() const;
  std::string name() const;
};

/// Parses "fermion", "annihilation", "creation" or "linear".
DriverKind parse_driver_kind(const std::string& name);

/// Delta xi_k over [tau_k, tau_{k+1}). Throws ConfigError on a layout mismatch.
CliffordElement driver_increment(const SpacePtr& space, const Driver& driver, int k);

}  // namespace fqsde
