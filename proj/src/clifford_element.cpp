#include "fqsde/clifford_element.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include <Eigen/Eigenvalues>

#include "fqsde/errors.hpp"

namespace fqsde {

namespace {

Eigen::VectorXd gram_spectrum(const Matrix& m) {
  const Matrix gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseMax(0.0);
}

void require_layout(const CliffordSpace& space, IncrementLayout layout, const char* what) {
  if (space.layout() != layout)
    throw ConfigError(std::string(what) + ": space was built for the " +
                      (space.layout() == IncrementLayout::Single ? "fermion-field" : "creation/annihilation") +
                      " driver");
}

}  // namespace

CliffordElement::CliffordElement(SpacePtr space, Matrix mat) : space_(std::move(space)), mat_(std::move(mat)) {
  if (!space_) throw DomainError("element needs a space");
  if (mat_.rows() != space_->dim() || mat_.cols() != space_->dim())
    throw DomainError("matrix shape does not match space dimension " + std::to_string(space_->dim()));
}

CliffordElement CliffordElement::zero(SpacePtr space) {
  const int d = space->dim();
  return {std::move(space), Matrix::Zero(d, d)};
}

CliffordElement CliffordElement::identity(SpacePtr space) {
  const int d = space->dim();
  return {std::move(space), Matrix::Identity(d, d)};
}

CliffordElement CliffordElement::scalar(SpacePtr space, Complex c) {
  const int d = space->dim();
  return {std::move(space), c * Matrix::Identity(d, d)};
}

CliffordElement CliffordElement::generator(SpacePtr space, int j) {
  Matrix m = space->generator(j);
  return {std::move(space), std::move(m)};
}

CliffordElement CliffordElement::monomial(SpacePtr space, Mask s) {
  Matrix m = space->monomial(s);
  return {std::move(space), std::move(m)};
}

void CliffordElement::require_same_space(const CliffordElement& other) const {
  if (space_ != other.space_) throw DomainError("elements belong to different spaces");
}

CliffordElement CliffordElement::adjoint() const { return {space_, mat_.adjoint()}; }

CliffordElement& CliffordElement::operator+=(const CliffordElement& rhs) {
  require_same_space(rhs);
  mat_ += rhs.mat_;
  return *this;
}

CliffordElement& CliffordElement::operator-=(const CliffordElement& rhs) {
  require_same_space(rhs);
  mat_ -= rhs.mat_;
  return *this;
}

CliffordElement& CliffordElement::operator*=(const CliffordElement& rhs) {
  require_same_space(rhs);
  mat_ = mat_ * rhs.mat_;
  return *this;
}

CliffordElement& CliffordElement::operator*=(Complex c) {
  mat_ *= c;
  return *this;
}

CliffordElement operator*(const CliffordElement& lhs, const CliffordElement& rhs) {
  lhs.require_same_space(rhs);
  return {lhs.space_, lhs.mat_ * rhs.mat_};
}

Complex state(const CliffordElement& x) { return x.matrix().trace() / static_cast<double>(x.space().dim()); }

double lp_norm(const CliffordElement& x, double p) {
  if (!(p >= 1.0)) throw DomainError("L^p norm needs p >= 1, got " + std::to_string(p));
  const double d = x.space().dim();
  if (p == 2.0) return std::sqrt(x.matrix().squaredNorm() / d);
  const Eigen::VectorXd lambda = gram_spectrum(x.matrix());
  double acc = 0.0;
  for (double l : lambda) acc += std::pow(l, p / 2.0);
  return std::pow(acc / d, 1.0 / p);
}

double op_norm(const CliffordElement& x) { return std::sqrt(gram_spectrum(x.matrix()).maxCoeff()); }

CliffordElement psd_power(const CliffordElement& a, double s) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  Eigen::VectorXd lambda = solver.eigenvalues().cwiseMax(0.0);
  for (auto& l : lambda) l = (l == 0.0) ? 0.0 : std::pow(l, s);
  const Matrix& v = solver.eigenvectors();
  return {a.space_ptr(), v * lambda.cast<Complex>().asDiagonal() * v.adjoint()};
}

double psd_lp_norm(const CliffordElement& a, double p) {
  if (!(p >= 1.0)) throw DomainError("L^p norm needs p >= 1, got " + std::to_string(p));
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  double acc = 0.0;
  for (double l : solver.eigenvalues()) acc += std::pow(std::max(l, 0.0), p);
  return std::pow(acc / a.space().dim(), 1.0 / p);
}

CliffordElement abs_power(const CliffordElement& x, double q) {
  return psd_power(CliffordElement(x.space_ptr(), x.matrix().adjoint() * x.matrix()), q / 2.0);
}

CliffordElement anticommutator(const CliffordElement& x, const CliffordElement& y) { return x * y + y * x; }

CliffordElement commutator(const CliffordElement& x, const CliffordElement& y) { return x * y - y * x; }

CliffordElement fermion_increment(const SpacePtr& space, int k) {
  require_layout(*space, IncrementLayout::Single, "fermion_increment");
  const double h = space->grid().step(k);
  return std::sqrt(h) * CliffordElement::generator(space, k + 1);
}

CliffordElement annihilation_increment(const SpacePtr& space, int k) {
  require_layout(*space, IncrementLayout::MajoranaPair, "annihilation_increment");
  const double h = space->grid().step(k);
  Matrix a = space->generator(2 * k + 1) + Complex{0.0, 1.0} * space->generator(2 * k + 2);
  return {space, (0.5 * std::sqrt(h)) * a};
}

CliffordElement creation_increment(const SpacePtr& space, int k) { return annihilation_increment(space, k).adjoint(); }

Complex monomial_coefficient(const CliffordElement& x, Mask s) {
  const PauliWord w = x.space().monomial_word(s);
  const Matrix& m = x.matrix();
  Complex acc{0.0, 0.0};
  const auto d = static_cast<std::uint32_t>(x.space().dim());
  for (std::uint32_t b = 0; b < d; ++b) acc += std::conj(w.entry(b)) * m(b ^ w.x, b);
  return acc / static_cast<double>(d);
}

CliffordElement conditional_expect(const CliffordElement& x, FiltrationLevel level) {
  const CliffordSpace& space = x.space();
  const Mask mask = space.level_mask(level);
  if (level.k == space.generator_count()) return x;
  const auto d = static_cast<std::uint32_t>(space.dim());
  const Matrix& m = x.matrix();
  Matrix out = Matrix::Zero(d, d);
  for (Mask s = 0;; ++s) {
    const PauliWord w = space.monomial_word(s);
    Complex c{0.0, 0.0};
    for (std::uint32_t b = 0; b < d; ++b) c += std::conj(w.entry(b)) * m(b ^ w.x, b);
    c /= static_cast<double>(d);
    if (c != Complex{0.0, 0.0})
      for (std::uint32_t b = 0; b < d; ++b) out(b ^ w.x, b) += c * w.entry(b);
    if (s == mask) break;
  }
  return {x.space_ptr(), std::move(out)};
}

double level_defect(const CliffordElement& x, FiltrationLevel level) {
  return lp_norm(x - conditional_expect(x, level), 2.0);
}

CliffordElement parity(const CliffordElement& x) {
  const Eigen::VectorXd& g = x.space().parity_diagonal();
  Matrix out = g.cast<Complex>().asDiagonal() * x.matrix() * g.cast<Complex>().asDiagonal();
  return {x.space_ptr(), std::move(out)};
}

ParityParts parity_decompose(const CliffordElement& x) {
  const CliffordElement px = parity(x);
  return {0.5 * (x + px), 0.5 * (x - px)};
}

MonomialExpansion monomial_expand(const CliffordElement& x, double cutoff) {
  MonomialExpansion out;
  const Mask full = x.space().full_mask();
  for (Mask s = 0;; ++s) {
    const Complex c = monomial_coefficient(x, s);
    if (std::abs(c) > cutoff) out.emplace(s, c);
    if (s == full) break;
  }
  return out;
}

CliffordElement reconstruct(const SpacePtr& space, const MonomialExpansion& coefficients) {
  const auto d = static_cast<std::uint32_t>(space->dim());
  Matrix out = Matrix::Zero(d, d);
  for (const auto& [s, c] : coefficients) {
    const PauliWord w = space->monomial_word(s);
    for (std::uint32_t b = 0; b < d; ++b) out(b ^ w.x, b) += c * w.entry(b);
  }
  return {space, std::move(out)};
}

void write_matrix(std::ostream& os, const CliffordElement& x) {
  const Matrix& m = x.matrix();
  const auto old_precision = os.precision(17);
  os << "dim " << m.rows() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) os << ' ';
      os << m(r, c).real() << ' ' << m(r, c).imag();
    }
    os << '\n';
  }
  os.precision(old_precision);
}

Matrix read_matrix(std::istream& is) {
  std::string tag;
  Eigen::Index d = 0;
  if (!(is >> tag >> d) || tag != "dim" || d <= 0) throw DomainError("matrix dump: missing 'dim <d>' header");
  Matrix m(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) {
      double re = 0.0, im = 0.0;
      if (!(is >> re >> im)) throw DomainError("matrix dump: truncated at row " + std::to_string(r));
      m(r, c) = {re, im};
    }
  return m;
}

}  // namespace fqsde
