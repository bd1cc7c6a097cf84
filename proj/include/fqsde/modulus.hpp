#pragma once

#include <functional>
#include <string>
#include <vector>

namespace fqsde {

using ScalarFn = std::function<double(double)>;

/// Outcome of the numeric divergence test for int_{0+} dr / rho(r).
///
/// The integral is split into decades [10^{-(d+1)}, 10^{-d}] for d = 2..9. The test passes
/// when the decade contributions do not decay (rho at least linear near 0), or when their
/// successive ratios increase strictly and the tail decays no faster than harmonically in
/// the decade index (rho ~ r log(1/r)). Geometric decay (rho ~ r^a with a < 1) fails.
struct OsgoodCertificate {
  std::vector<double> decade_integrals;
  std::vector<double> ratios;
  double tail_exponent = 0.0;
  bool passed = false;
  std::string reason;
};

OsgoodCertificate certify_osgood(const ScalarFn& rho);

/// Modulus rho in ||F(x1) - F(x2)||^2 + ... <= rho(||x1 - x2||^2).
class OsgoodModulus {
 public:
  enum class Kind { Lipschitz, Osgood };

  /// rho(r) = L r with L >= 0.
  static OsgoodModulus lipschitz(double constant);
  /// A general modulus; validated (rho(0) = 0, positive, non-decreasing, divergence
  /// certificate). Throws DomainError when any check fails.
  static OsgoodModulus osgood(std::string name, ScalarFn rho);

  Kind kind() const noexcept { return kind_; }
  bool is_lipschitz() const noexcept { return kind_ == Kind::Lipschitz; }
  /// L for a Lipschitz modulus; throws DomainError otherwise.
  double lipschitz_constant() const;
  const std::string& name() const noexcept { return name_; }
  const OsgoodCertificate& certificate() const noexcept { return certificate_; }

  double operator()(double r) const;

  /// Pointwise sum of two moduli (Lipschitz + Lipschitz stays Lipschitz).
  friend OsgoodModulus operator+(const OsgoodModulus& a, const OsgoodModulus& b);

 private:
  OsgoodModulus() = default;

  Kind kind_ = Kind::Lipschitz;
  std::string name_;
  double constant_ = 0.0;
  ScalarFn rho_;
  OsgoodCertificate certificate_;
};

/// scale * r * ln(e + 1/sqrt(r)), the modulus of the built-in radial coefficient.
ScalarFn radial_log_rho(double scale);
/// scale * r * ln(e + 1/r).
ScalarFn log_rho(double scale);

/// U^{-1}(U(u0) + int_{t0}^{t} phi) with U(r) = int_{u0}^{r} ds / rho(s): the bound on any
/// continuous u with u(t) <= u0 + int phi rho(u). Returns 0 for u0 = 0 and +inf when the
/// target exceeds the range of U (finite-time blow-up of the comparison equation).
double bihari_bound(double u0, const ScalarFn& phi, const OsgoodModulus& modulus, double t0, double t);

}  // namespace fqsde
