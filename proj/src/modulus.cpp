#include "fqsde/modulus.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "fqsde/errors.hpp"

namespace fqsde {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kQuadTol = 1e-13;
constexpr unsigned kQuadDepth = 20;

/// int_a^b dr / rho(r) in the variable s = ln r.
double reciprocal_integral(const ScalarFn& rho, double a, double b) {
  auto integrand = [&](double s) {
    const double r = std::exp(s);
    return r / rho(r);
  };
  return gauss_kronrod<double, 31>::integrate(integrand, std::log(a), std::log(b), kQuadDepth, kQuadTol);
}

}  // namespace

OsgoodCertificate certify_osgood(const ScalarFn& rho) {
  OsgoodCertificate cert;
  for (int d = 2; d <= 9; ++d)
    cert.decade_integrals.push_back(reciprocal_integral(rho, std::pow(10.0, -(d + 1)), std::pow(10.0, -d)));
  for (std::size_t i = 0; i + 1 < cert.decade_integrals.size(); ++i)
    cert.ratios.push_back(cert.decade_integrals[i + 1] / cert.decade_integrals[i]);

  for (double v : cert.decade_integrals)
    if (!std::isfinite(v) || !(v > 0.0)) {
      cert.reason = "decade integral of 1/rho is not finite and positive";
      return cert;
    }

  bool non_decaying = true;
  bool increasing = true;
  for (std::size_t i = 0; i < cert.ratios.size(); ++i) {
    if (cert.ratios[i] < 1.0 - 1e-9) non_decaying = false;
    if (i > 0 && !(cert.ratios[i] > cert.ratios[i - 1] + 1e-6)) increasing = false;
  }
  // Decay exponent of the last decade pair against the log-scale index ln(1/r) ~ d + 1/2.
  const double last = cert.ratios.back();
  const double d_last = 9.0;
  cert.tail_exponent = std::log(last) / std::log((d_last - 0.5) / (d_last + 0.5));

  if (non_decaying) {
    cert.passed = true;
    cert.reason = "decade contributions do not decay";
  } else if (increasing && cert.tail_exponent <= 1.5) {
    cert.passed = true;
    cert.reason = "decade contributions decay sub-geometrically, at most harmonically";
  } else if (!increasing) {
    cert.reason = "decade contributions decay geometrically; int dr/rho converges at 0";
  } else {
    cert.reason = "decade contributions decay faster than harmonically; int dr/rho converges at 0";
  }
  return cert;
}

OsgoodModulus OsgoodModulus::lipschitz(double constant) {
  if (!(constant >= 0.0) || !std::isfinite(constant)) throw DomainError("Lipschitz modulus needs a finite L >= 0");
  OsgoodModulus m;
  m.kind_ = Kind::Lipschitz;
  m.constant_ = constant;
  m.name_ = "lipschitz";
  m.certificate_.passed = true;
  m.certificate_.reason = "linear modulus";
  return m;
}

OsgoodModulus OsgoodModulus::osgood(std::string name, ScalarFn rho) {
  if (!rho) throw DomainError("Osgood modulus needs a function");
  if (std::abs(rho(0.0)) > 0.0) throw DomainError("modulus '" + name + "' has rho(0) != 0");
  double prev = 0.0;
  for (int e = -14 * 4; e <= 2 * 4; ++e) {
    const double r = std::pow(10.0, e / 4.0);
    const double v = rho(r);
    if (!std::isfinite(v) || !(v > 0.0))
      throw DomainError("modulus '" + name + "' is not positive at r = " + std::to_string(r));
    if (v < prev * (1.0 - 1e-12)) throw DomainError("modulus '" + name + "' is decreasing near r = " + std::to_string(r));
    prev = v;
  }
  OsgoodCertificate cert = certify_osgood(rho);
  if (!cert.passed) throw DomainError("modulus '" + name + "' fails the Osgood condition: " + cert.reason);
  OsgoodModulus m;
  m.kind_ = Kind::Osgood;
  m.name_ = std::move(name);
  m.rho_ = std::move(rho);
  m.certificate_ = std::move(cert);
  return m;
}

double OsgoodModulus::lipschitz_constant() const {
  if (kind_ != Kind::Lipschitz) throw DomainError("modulus '" + name_ + "' is not Lipschitz");
  return constant_;
}

double OsgoodModulus::operator()(double r) const { return kind_ == Kind::Lipschitz ? constant_ * r : rho_(r); }

OsgoodModulus operator+(const OsgoodModulus& a, const OsgoodModulus& b) {
  if (a.is_lipschitz() && b.is_lipschitz()) return OsgoodModulus::lipschitz(a.constant_ + b.constant_);
  return OsgoodModulus::osgood(a.name_ + "+" + b.name_, [a, b](double r) { return a(r) + b(r); });
}

ScalarFn radial_log_rho(double scale) {
  return [scale](double r) { return r <= 0.0 ? 0.0 : scale * r * std::log(std::numbers::e + 1.0 / std::sqrt(r)); };
}

ScalarFn log_rho(double scale) {
  return [scale](double r) { return r <= 0.0 ? 0.0 : scale * r * std::log(std::numbers::e + 1.0 / r); };
}

double bihari_bound(double u0, const ScalarFn& phi, const OsgoodModulus& modulus, double t0, double t) {
  if (!(u0 >= 0.0)) throw DomainError("Bihari bound needs u0 >= 0");
  if (!(t >= t0)) throw DomainError("Bihari bound needs t >= t0");
  if (u0 == 0.0) return 0.0;
  if (t == t0) return u0;
  const double target = gauss_kronrod<double, 31>::integrate(phi, t0, t, kQuadDepth, kQuadTol);
  if (!(target >= 0.0)) throw DomainError("Bihari bound needs phi >= 0");
  if (target == 0.0) return u0;
  if (modulus.is_lipschitz()) {
    const double L = modulus.lipschitz_constant();
    if (L == 0.0) return u0;
  }

  ScalarFn rho = [&modulus](double r) { return modulus(r); };
  auto U = [&](double log_r) {
    auto integrand = [&](double s) {
      const double r = std::exp(s);
      return r / rho(r);
    };
    return gauss_kronrod<double, 31>::integrate(integrand, std::log(u0), log_r, kQuadDepth, kQuadTol);
  };

  const double lo0 = std::log(u0);
  double lo = lo0;
  double hi = lo0 + 1.0;
  while (U(hi) < target) {
    lo = hi;
    hi = lo0 + 2.0 * (hi - lo0);
    if (hi > 700.0) return std::numeric_limits<double>::infinity();
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (U(mid) < target ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace fqsde
