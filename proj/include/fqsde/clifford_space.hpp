#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "fqsde/time_grid.hpp"

namespace fqsde {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
/// Subset S of {1..n_gen}; bit j-1 set <=> generator e_j is a factor of e_S.
using Mask = std::uint32_t;

/// i^phase X^x Z^z on ceil(n_gen/2) two-level factors; bit q of x/z acts on factor q.
///
/// Acting on basis vector |b>: X^x Z^z |b> = (-1)^{popcount(z & b)} |b ^ x>, so the only
/// nonzero entry in column b sits in row b ^ x.
struct PauliWord {
  std::uint32_t x = 0;
  std::uint32_t z = 0;
  int phase = 0;  // power of i, kept in [0, 4)

  PauliWord operator*(const PauliWord& rhs) const noexcept;
  PauliWord adjoint() const noexcept;
  /// Entry at (b ^ x, b).
  Complex entry(std::uint32_t b) const noexcept;
  Matrix to_matrix(int dim) const;
};

/// How many Majorana generators each time increment consumes.
enum class IncrementLayout {
  Single,         // fermion field: Delta W_k = sqrt(Delta_k) e_{k+1}
  MajoranaPair,   // creation/annihilation: e_{2k+1}, e_{2k+2} build Delta A_k
};

struct SpaceOptions {
  int max_generators = 14;
};

/// Filtration index: the subalgebra generated by e_1 .. e_k (k = 0 is the scalars).
struct FiltrationLevel {
  int k = 0;
};

/// Finite-mode Clifford probability space over a time grid.
///
/// Generator e_{2q+1} = Z_0..Z_{q-1} X_q and e_{2q+2} = Z_0..Z_{q-1} Y_q (Jordan-Wigner
/// Majorana pairing); the grading unitary is Z_0 Z_1 ... Z_{m-1}. The state is the
/// normalized trace, which is the vacuum expectation on the Clifford algebra.
/// Immutable after construction.
class CliffordSpace {
 public:
  CliffordSpace(TimeGrid grid, IncrementLayout layout, SpaceOptions options);

  const TimeGrid& grid() const noexcept { return grid_; }
  IncrementLayout layout() const noexcept { return layout_; }
  int generators_per_increment() const noexcept { return layout_ == IncrementLayout::Single ? 1 : 2; }
  int generator_count() const noexcept { return n_gen_; }
  int factor_count() const noexcept { return factors_; }
  int dim() const noexcept { return dim_; }
  std::uint64_t monomial_count() const noexcept { return std::uint64_t{1} << n_gen_; }

  /// e_j for 1 <= j <= n_gen.
  const Matrix& generator(int j) const;
  const PauliWord& generator_word(int j) const;
  /// e_S = e_{s_1} e_{s_2} ... with s_1 < s_2 < ...
  PauliWord monomial_word(Mask s) const;
  Matrix monomial(Mask s) const;

  /// Diagonal of the grading unitary (entries +-1).
  const Eigen::VectorXd& parity_diagonal() const noexcept { return parity_diag_; }
  Matrix parity_unitary() const;

  /// Filtration level at grid node k: the increments before tau_k are available.
  FiltrationLevel node_level(int k) const;
  Mask level_mask(FiltrationLevel level) const;
  Mask full_mask() const noexcept { return level_mask({n_gen_}); }

 private:
  TimeGrid grid_;
  IncrementLayout layout_;
  int n_gen_;
  int factors_;
  int dim_;
  std::vector<PauliWord> words_;
  std::vector<Matrix> generators_;
  Eigen::VectorXd parity_diag_;
};

using SpacePtr = std::shared_ptr<const CliffordSpace>;

/// Generators: grid.n for the Single layout, 2 grid.n for MajoranaPair.
/// Throws ResourceError when that exceeds options.max_generators.
SpacePtr make_space(const TimeGrid& grid, IncrementLayout layout = IncrementLayout::Single,
                    SpaceOptions options = {});

}  // namespace fqsde
