#include "fqsde/clifford_space.hpp"

#include <bit>
#include <string>

#include "fqsde/errors.hpp"

namespace fqsde {

namespace {

constexpr int kHardGeneratorCap = 30;

Complex i_power(int phase) {
  switch (phase & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

PauliWord PauliWord::operator*(const PauliWord& rhs) const noexcept {
  // Z^{z1} X^{x2} = (-1)^{|z1 & x2|} X^{x2} Z^{z1}
  const int swaps = std::popcount(z & rhs.x);
  return {x ^ rhs.x, z ^ rhs.z, (phase + rhs.phase + 2 * swaps) & 3};
}

PauliWord PauliWord::adjoint() const noexcept {
  const int swaps = std::popcount(z & x);
  return {x, z, (-phase + 2 * swaps) & 3};
}

Complex PauliWord::entry(std::uint32_t b) const noexcept {
  const int sign_flips = std::popcount(z & b);
  return i_power(phase + 2 * sign_flips);
}

Matrix PauliWord::to_matrix(int dim) const {
  Matrix m = Matrix::Zero(dim, dim);
  for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(dim); ++b) m(b ^ x, b) = entry(b);
  return m;
}

CliffordSpace::CliffordSpace(TimeGrid grid, IncrementLayout layout, SpaceOptions options)
    : grid_(std::move(grid)), layout_(layout) {
  n_gen_ = grid_.n() * generators_per_increment();
  const int cap = std::min(options.max_generators, kHardGeneratorCap);
  if (n_gen_ > cap)
    throw ResourceError("space needs " + std::to_string(n_gen_) + " generators, limit is " +
                        std::to_string(cap) + " (max_generators)");
  factors_ = (n_gen_ + 1) / 2;
  dim_ = 1 << factors_;

  words_.reserve(n_gen_);
  generators_.reserve(n_gen_);
  for (int j = 1; j <= n_gen_; ++j) {
    const int q = (j - 1) / 2;
    const std::uint32_t below = (1u << q) - 1u;
    PauliWord w;
    w.x = 1u << q;
    if ((j - 1) % 2 == 0) {
      w.z = below;  // Z_{<q} X_q
      w.phase = 0;
    } else {
      w.z = below | (1u << q);  // Z_{<q} Y_q, Y = i X Z
      w.phase = 1;
    }
    words_.push_back(w);
    generators_.push_back(w.to_matrix(dim_));
  }

  parity_diag_.resize(dim_);
  for (int b = 0; b < dim_; ++b) parity_diag_[b] = (std::popcount(static_cast<unsigned>(b)) % 2 == 0) ? 1.0 : -1.0;
}

const Matrix& CliffordSpace::generator(int j) const {
  if (j < 1 || j > n_gen_) throw DomainError("generator index " + std::to_string(j) + " out of range");
  return generators_[j - 1];
}

const PauliWord& CliffordSpace::generator_word(int j) const {
  if (j < 1 || j > n_gen_) throw DomainError("generator index " + std::to_string(j) + " out of range");
  return words_[j - 1];
}

PauliWord CliffordSpace::monomial_word(Mask s) const {
  if (s & ~full_mask()) throw DomainError("monomial mask references a generator outside the space");
  PauliWord w;
  while (s != 0) {
    const int bit = std::countr_zero(s);
    w = w * words_[bit];
    s &= s - 1;
  }
  return w;
}

Matrix CliffordSpace::monomial(Mask s) const { return monomial_word(s).to_matrix(dim_); }

Matrix CliffordSpace::parity_unitary() const { return parity_diag_.cast<Complex>().asDiagonal(); }

FiltrationLevel CliffordSpace::node_level(int k) const {
  if (k < 0 || k > grid_.n()) throw DomainError("node index " + std::to_string(k) + " out of range");
  return {k * generators_per_increment()};
}

Mask CliffordSpace::level_mask(FiltrationLevel level) const {
  if (level.k < 0 || level.k > n_gen_)
    throw DomainError("filtration level " + std::to_string(level.k) + " out of range");
  return level.k == 32 ? ~Mask{0} : ((Mask{1} << level.k) - 1);
}

SpacePtr make_space(const TimeGrid& grid, IncrementLayout layout, SpaceOptions options) {
  return std::make_shared<const CliffordSpace>(grid, layout, options);
}

}  // namespace fqsde
