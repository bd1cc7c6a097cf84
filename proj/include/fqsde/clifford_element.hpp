#pragma once

#include <iosfwd>
#include <map>

#include "fqsde/clifford_space.hpp"

namespace fqsde {

/// One element of the finite-mode algebra, stored as its matrix in the faithful
/// representation of its space.
class CliffordElement {
 public:
  CliffordElement(SpacePtr space, Matrix mat);

  static CliffordElement zero(SpacePtr space);
  static CliffordElement identity(SpacePtr space);
  static CliffordElement scalar(SpacePtr space, Complex c);
  /// e_j, 1-based.
  static CliffordElement generator(SpacePtr space, int j);
  static CliffordElement monomial(SpacePtr space, Mask s);

  const CliffordSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  const Matrix& matrix() const noexcept { return mat_; }
  Complex operator()(int row, int col) const { return mat_(row, col); }

  CliffordElement adjoint() const;

  CliffordElement& operator+=(const CliffordElement& rhs);
  CliffordElement& operator-=(const CliffordElement& rhs);
  CliffordElement& operator*=(const CliffordElement& rhs);
  CliffordElement& operator*=(Complex c);

  friend CliffordElement operator+(CliffordElement lhs, const CliffordElement& rhs) { return lhs += rhs; }
  friend CliffordElement operator-(CliffordElement lhs, const CliffordElement& rhs) { return lhs -= rhs; }
  friend CliffordElement operator*(const CliffordElement& lhs, const CliffordElement& rhs);
  friend CliffordElement operator*(CliffordElement x, Complex c) { return x *= c; }
  friend CliffordElement operator*(Complex c, CliffordElement x) { return x *= c; }
  friend CliffordElement operator*(CliffordElement x, double c) { return x *= Complex{c, 0.0}; }
  friend CliffordElement operator*(double c, CliffordElement x) { return x *= Complex{c, 0.0}; }
  friend CliffordElement operator-(CliffordElement x) { return x *= Complex{-1.0, 0.0}; }

 private:
  void require_same_space(const CliffordElement& other) const;

  SpacePtr space_;
  Matrix mat_;
};

/// m(x), the normalized trace.
Complex state(const CliffordElement& x);

/// ||x||_p = m(|x|^p)^{1/p}; p < 1 throws DomainError.
double lp_norm(const CliffordElement& x, double p);
/// Largest singular value.
double op_norm(const CliffordElement& x);

/// |x|^q = (x* x)^{q/2}, negative eigenvalues of x* x clipped to zero.
CliffordElement abs_power(const CliffordElement& x, double q);
/// A^s for positive semidefinite Hermitian A (clipped spectrum).
CliffordElement psd_power(const CliffordElement& a, double s);
/// ||a||_p for positive semidefinite a, from its spectrum.
double psd_lp_norm(const CliffordElement& a, double p);

CliffordElement anticommutator(const CliffordElement& x, const CliffordElement& y);
CliffordElement commutator(const CliffordElement& x, const CliffordElement& y);

/// Delta W_k = sqrt(Delta_k) e_{k+1}. Requires the Single layout.
CliffordElement fermion_increment(const SpacePtr& space, int k);
/// Delta A_k = sqrt(Delta_k) (e_{2k+1} + i e_{2k+2}) / 2. Requires the MajoranaPair layout.
CliffordElement annihilation_increment(const SpacePtr& space, int k);
/// Delta A*_k, the adjoint of annihilation_increment.
CliffordElement creation_increment(const SpacePtr& space, int k);

/// Trace-orthogonal projection onto span{e_S : S within the first level.k generators}.
CliffordElement conditional_expect(const CliffordElement& x, FiltrationLevel level);
/// ||x - E(x | level)||_2, the distance to the level algebra.
double level_defect(const CliffordElement& x, FiltrationLevel level);

/// P(x) = Gamma x Gamma.
CliffordElement parity(const CliffordElement& x);

struct ParityParts {
  CliffordElement even;
  CliffordElement odd;
};
ParityParts parity_decompose(const CliffordElement& x);

using MonomialExpansion = std::map<Mask, Complex>;

/// c_S = m(e_S* x) for one subset.
Complex monomial_coefficient(const CliffordElement& x, Mask s);
/// All coefficients with |c_S| > cutoff.
MonomialExpansion monomial_expand(const CliffordElement& x, double cutoff = 0.0);
CliffordElement reconstruct(const SpacePtr& space, const MonomialExpansion& coefficients);

/// Row-major dump: first line "dim <d>", then d lines of d "re im" pairs.
void write_matrix(std::ostream& os, const CliffordElement& x);
Matrix read_matrix(std::istream& is);

}  // namespace fqsde
