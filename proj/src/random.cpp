#include "fqsde/random.hpp"

#include <cmath>

namespace fqsde {

std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t stream_id(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

CliffordElement random_level_element(const SpacePtr& space, FiltrationLevel level, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const Mask mask = space->level_mask(level);
  MonomialExpansion coeffs;
  for (Mask s = 0;; ++s) {
    const double re = normal(rng);
    const double im = normal(rng);
    coeffs.emplace(s, Complex{re, im});
    if (s == mask) break;
  }
  CliffordElement x = reconstruct(space, coeffs);
  const double norm = lp_norm(x, 2.0);
  return norm > 0.0 ? (1.0 / norm) * x : CliffordElement::identity(space);
}

CliffordElement random_selfadjoint_element(const SpacePtr& space, FiltrationLevel level, Rng& rng) {
  CliffordElement x = random_level_element(space, level, rng);
  CliffordElement h = 0.5 * (x + x.adjoint());
  const double norm = lp_norm(h, 2.0);
  return norm > 0.0 ? (1.0 / norm) * h : CliffordElement::identity(space);
}

}  // namespace fqsde
