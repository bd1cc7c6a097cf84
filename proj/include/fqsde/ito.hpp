#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fqsde/adapted_process.hpp"
#include "fqsde/driver.hpp"
#include "fqsde/random.hpp"

namespace fqsde {

/// Right integral sums f_j dxi_j; left integral sums dxi_j f_j.
enum class Side { Left, Right };

std::string to_string(Side side);

// Discrete integrals over the first `upto` increments (upto <= f.size(), upto <= grid.n).

CliffordElement right_integral(const AdaptedProcess& f, int upto);
CliffordElement left_integral(const AdaptedProcess& f, int upto);
CliffordElement driver_integral(const AdaptedProcess& f, const Driver& driver, int upto, Side side);
/// Partial sums M_0 = 0, M_1, ..., M_upto.
std::vector<CliffordElement> integral_path(const AdaptedProcess& f, const Driver& driver, int upto, Side side);
/// Left-endpoint Riemann sum of f_j Delta_j.
CliffordElement time_integral(const AdaptedProcess& f, int upto);

/// sum_j |f_j|^q Delta_j, or sum_j |f_j*|^q Delta_j when `adjoint` is set.
CliffordElement power_sum(const AdaptedProcess& f, double q, int upto, bool adjoint = false);

/// max of the row and column square-function norms:
/// || (sum |f_j|^2 Delta_j)^{1/2} ||_p and || (sum |f_j*|^2 Delta_j)^{1/2} ||_p.
double hp_norm(const AdaptedProcess& f, double p, int upto);
/// (sum_j ||f_j||_p^q Delta_j)^{1/q}.
double lqlp_norm(const AdaptedProcess& f, double q, double p, int upto);

/// One measured inequality; ratio = lhs / rhs.
struct InequalityReport {
  std::string suite;
  double p = 0.0;
  double q = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double inverse_ratio = 0.0;
};

/// "suite,p,q,trial,seed,lhs,rhs,ratio"
std::string inequality_csv_header();
std::string to_csv_row(const InequalityReport& report);

/// || (sum |f_j|^q Delta_j)^{1/q} ||_p  <=  (sum ||f_j||_p^q Delta_j)^{1/q}, 1 <= q <= p.
InequalityReport check_norm_exchange(const AdaptedProcess& f, double q, double p);

/// Measures ||integral||_p against the square-function norm (fermion driver) or against
/// (sum ||f_j||_p^2 Delta_j)^{1/2} (annihilation/creation/linear drivers). Needs p >= 2.
InequalityReport check_bg(const AdaptedProcess& f, double p, Side side, const Driver& driver);

/// ||integral||_p against (sum ||f_j||_p^2 Delta_j)^{1/2}; the ratio is an empirical C(p).
InequalityReport check_l2lp_bound(const AdaptedProcess& f, double p, Side side, const Driver& driver);

/// hp_norm(f, p) against (sum ||f_j||_p^2 Delta_j)^{1/2}; ratio <= 1 for p >= 2.
InequalityReport check_hp_bound(const AdaptedProcess& f, double p);

/// max over s < t of || E(M_t | level(s)) - M_s ||_p along the integral path.
double martingale_check(const AdaptedProcess& f, const Driver& driver, Side side, double p = 2.0);

/// For h of definite parity inside `level`: max over increments j at or beyond the level of
/// || h dxi_j -+ dxi_j h ||_op (minus for even h, plus for odd h).
double parity_exchange_defect(const CliffordElement& h, FiltrationLevel level, const Driver& driver);

enum class ProcessKind { General, Even, SelfAdjoint, SelfAdjointEven };

/// count random adapted values, each normalized to unit L^2 norm.
AdaptedProcess random_adapted_process(const SpacePtr& space, int count, Rng& rng,
                                      ProcessKind kind = ProcessKind::General);

}  // namespace fqsde
