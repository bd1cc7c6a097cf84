#include "fqsde/ito.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fqsde/errors.hpp"

namespace fqsde {

namespace {

void require_upto(const AdaptedProcess& f, int upto) {
  if (upto < 0 || upto > f.size() || upto > f.space().grid().n())
    throw DomainError("integration limit " + std::to_string(upto) + " outside the process range");
}

/// || A^{1/r} ||_p for positive semidefinite A.
double root_norm(const CliffordElement& a, double r, double p) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  double acc = 0.0;
  for (double mu : solver.eigenvalues()) acc += std::pow(std::max(mu, 0.0), p / r);
  return std::pow(acc / a.space().dim(), 1.0 / p);
}

InequalityReport make_report(std::string suite, double p, double q, double lhs, double rhs) {
  InequalityReport r;
  r.suite = std::move(suite);
  r.p = p;
  r.q = q;
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = lhs / rhs;
  r.inverse_ratio = lhs > 0.0 ? rhs / lhs : std::numeric_limits<double>::infinity();
  return r;
}

CliffordElement make_kind(CliffordElement x, ProcessKind kind) {
  switch (kind) {
    case ProcessKind::General: return x;
    case ProcessKind::Even: return parity_decompose(x).even;
    case ProcessKind::SelfAdjoint: return 0.5 * (x + x.adjoint());
    case ProcessKind::SelfAdjointEven: return parity_decompose(0.5 * (x + x.adjoint())).even;
  }
  return x;
}

}  // namespace

std::string to_string(Side side) { return side == Side::Left ? "left" : "right"; }

std::vector<CliffordElement> integral_path(const AdaptedProcess& f, const Driver& driver, int upto, Side side) {
  require_upto(f, upto);
  const SpacePtr& space = f.space_ptr();
  std::vector<CliffordElement> path;
  path.reserve(static_cast<std::size_t>(upto) + 1);
  path.push_back(CliffordElement::zero(space));
  for (int j = 0; j < upto; ++j) {
    const CliffordElement dxi = driver_increment(space, driver, j);
    path.push_back(path.back() + (side == Side::Right ? f[j] * dxi : dxi * f[j]));
  }
  return path;
}

CliffordElement driver_integral(const AdaptedProcess& f, const Driver& driver, int upto, Side side) {
  return integral_path(f, driver, upto, side).back();
}

CliffordElement right_integral(const AdaptedProcess& f, int upto) {
  return driver_integral(f, Driver::fermion(), upto, Side::Right);
}

CliffordElement left_integral(const AdaptedProcess& f, int upto) {
  return driver_integral(f, Driver::fermion(), upto, Side::Left);
}

CliffordElement time_integral(const AdaptedProcess& f, int upto) {
  require_upto(f, upto);
  CliffordElement acc = CliffordElement::zero(f.space_ptr());
  for (int j = 0; j < upto; ++j) acc += f.space().grid().step(j) * f[j];
  return acc;
}

CliffordElement power_sum(const AdaptedProcess& f, double q, int upto, bool adjoint) {
  require_upto(f, upto);
  CliffordElement acc = CliffordElement::zero(f.space_ptr());
  for (int j = 0; j < upto; ++j) {
    const CliffordElement v = adjoint ? f[j].adjoint() : f[j];
    acc += f.space().grid().step(j) * abs_power(v, q);
  }
  return acc;
}

double hp_norm(const AdaptedProcess& f, double p, int upto) {
  if (!(p >= 1.0)) throw DomainError("H^p norm needs p >= 1");
  require_upto(f, upto);
  CliffordElement row = CliffordElement::zero(f.space_ptr());
  CliffordElement col = CliffordElement::zero(f.space_ptr());
  for (int j = 0; j < upto; ++j) {
    const double h = f.space().grid().step(j);
    const Matrix& m = f[j].matrix();
    row += CliffordElement(f.space_ptr(), h * (m.adjoint() * m));
    col += CliffordElement(f.space_ptr(), h * (m * m.adjoint()));
  }
  return std::max(root_norm(row, 2.0, p), root_norm(col, 2.0, p));
}

double lqlp_norm(const AdaptedProcess& f, double q, double p, int upto) {
  if (!(q > 0.0)) throw DomainError("mixed norm needs q > 0");
  require_upto(f, upto);
  double acc = 0.0;
  for (int j = 0; j < upto; ++j) acc += std::pow(lp_norm(f[j], p), q) * f.space().grid().step(j);
  return std::pow(acc, 1.0 / q);
}

std::string inequality_csv_header() { return "suite,p,q,trial,seed,lhs,rhs,ratio"; }

std::string to_csv_row(const InequalityReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << r.suite << ',' << r.p << ',' << r.q << ',' << r.trial << ',' << r.seed << ',' << r.lhs << ',' << r.rhs
     << ',' << r.ratio;
  return os.str();
}

InequalityReport check_norm_exchange(const AdaptedProcess& f, double q, double p) {
  if (!(q >= 1.0)) throw DomainError("norm exchange needs q >= 1");
  if (q > p) throw DomainError("norm exchange needs q <= p (got q=" + std::to_string(q) + ", p=" + std::to_string(p) + ")");
  const int upto = std::min(f.size(), f.space().grid().n());
  const double lhs = root_norm(power_sum(f, q, upto), q, p);
  const double rhs = lqlp_norm(f, q, p, upto);
  if (!(rhs > 0.0)) throw DomainError("norm exchange is undefined for the zero process");
  return make_report("norm_exchange", p, q, lhs, rhs);
}

InequalityReport check_bg(const AdaptedProcess& f, double p, Side side, const Driver& driver) {
  if (!(p >= 2.0)) throw DomainError("Burkholder-Gundy check needs p >= 2");
  const int upto = std::min(f.size(), f.space().grid().n());
  const double lhs = lp_norm(driver_integral(f, driver, upto, side), p);
  const double rhs = driver.kind == DriverKind::FermionField ? hp_norm(f, p, upto) : lqlp_norm(f, 2.0, p, upto);
  if (!(rhs > 0.0)) throw DomainError("Burkholder-Gundy ratio is undefined for the zero process");
  return make_report("bg_ratio", p, 2.0, lhs, rhs);
}

InequalityReport check_l2lp_bound(const AdaptedProcess& f, double p, Side side, const Driver& driver) {
  if (!(p >= 2.0)) throw DomainError("L^2(L^p) bound needs p >= 2");
  const int upto = std::min(f.size(), f.space().grid().n());
  const double lhs = lp_norm(driver_integral(f, driver, upto, side), p);
  const double rhs = lqlp_norm(f, 2.0, p, upto);
  if (!(rhs > 0.0)) throw DomainError("L^2(L^p) ratio is undefined for the zero process");
  return make_report("l2lp_bound", p, 2.0, lhs, rhs);
}

InequalityReport check_hp_bound(const AdaptedProcess& f, double p) {
  if (!(p >= 2.0)) throw DomainError("H^p bound needs p >= 2");
  const int upto = std::min(f.size(), f.space().grid().n());
  const double rhs = lqlp_norm(f, 2.0, p, upto);
  if (!(rhs > 0.0)) throw DomainError("H^p bound ratio is undefined for the zero process");
  return make_report("hp_bound", p, 2.0, hp_norm(f, p, upto), rhs);
}

double martingale_check(const AdaptedProcess& f, const Driver& driver, Side side, double p) {
  const int upto = std::min(f.size(), f.space().grid().n());
  const std::vector<CliffordElement> path = integral_path(f, driver, upto, side);
  double worst = 0.0;
  for (int s = 0; s < upto; ++s) {
    const FiltrationLevel level = f.space().node_level(s);
    for (int t = s + 1; t <= upto; ++t)
      worst = std::max(worst, lp_norm(conditional_expect(path[t], level) - path[s], p));
  }
  return worst;
}

double parity_exchange_defect(const CliffordElement& h, FiltrationLevel level, const Driver& driver) {
  const double scale = std::max(1.0, op_norm(h));
  if (level_defect(h, level) > 1e-12 * scale) throw ContractViolation("element lies outside the stated level");
  const CliffordElement ph = parity(h);
  double sign = 0.0;
  if (op_norm(ph - h) <= 1e-12 * scale)
    sign = 1.0;
  else if (op_norm(ph + h) <= 1e-12 * scale)
    sign = -1.0;
  else
    throw DomainError("element has no definite parity");
  const SpacePtr& space = h.space_ptr();
  double worst = 0.0;
  for (int j = 0; j < space->grid().n(); ++j) {
    if (space->node_level(j).k < level.k) continue;
    const CliffordElement dxi = driver_increment(space, driver, j);
    worst = std::max(worst, op_norm(h * dxi - sign * (dxi * h)));
  }
  return worst;
}

AdaptedProcess random_adapted_process(const SpacePtr& space, int count, Rng& rng, ProcessKind kind) {
  std::vector<CliffordElement> values;
  values.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    CliffordElement v = make_kind(random_level_element(space, space->node_level(k), rng), kind);
    const double norm = lp_norm(v, 2.0);
    values.push_back(norm > 0.0 ? (1.0 / norm) * v : CliffordElement::identity(space));
  }
  return AdaptedProcess(space, std::move(values));
}

}  // namespace fqsde
