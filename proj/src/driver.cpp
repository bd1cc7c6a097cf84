#include "fqsde/driver.hpp"

#include <sstream>

#include "fqsde/errors.hpp"

namespace fqsde {

Driver Driver::adjoint() const {
  switch (kind) {
    case DriverKind::FermionField: return *this;
    case DriverKind::Annihilation: return creation();
    case DriverKind::Creation: return annihilation();
    case DriverKind::LinearCombination: return linear(std::conj(alpha2), std::conj(alpha1));
  }
  return *this;
}

std::string Driver::name() const {
  switch (kind) {
    case DriverKind::FermionField: return "fermion";
    case DriverKind::Annihilation: return "annihilation";
    case DriverKind::Creation: return "creation";
    case DriverKind::LinearCombination: {
      std::ostringstream os;
      os << "linear(" << alpha1.real() << (alpha1.imag() < 0 ? "" : "+") << alpha1.imag() << "i,"
         << alpha2.real() << (alpha2.imag() < 0 ? "" : "+") << alpha2.imag() << "i)";
      return os.str();
    }
  }
  return "unknown";
}

DriverKind parse_driver_kind(const std::string& name) {
  if (name == "fermion") return DriverKind::FermionField;
  if (name == "annihilation") return DriverKind::Annihilation;
  if (name == "creation") return DriverKind::Creation;
  if (name == "linear") return DriverKind::LinearCombination;
  throw ConfigError("unknown driver '" + name + "'", "driver.kind");
}

CliffordElement driver_increment(const SpacePtr& space, const Driver& driver, int k) {
  if (space->layout() != driver.layout())
    throw ConfigError("driver '" + driver.name() + "' does not match the space layout");
  switch (driver.kind) {
    case DriverKind::FermionField: return fermion_increment(space, k);
    case DriverKind::Annihilation: return annihilation_increment(space, k);
    case DriverKind::Creation: return creation_increment(space, k);
    case DriverKind::LinearCombination: {
      const CliffordElement a = annihilation_increment(space, k);
      return driver.alpha1 * a + driver.alpha2 * a.adjoint();
    }
  }
  throw ConfigError("unknown driver kind");
}

}  // namespace fqsde
