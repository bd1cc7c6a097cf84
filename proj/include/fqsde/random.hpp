#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "fqsde/clifford_element.hpp"

namespace fqsde {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; derives independent per-trial seeds from a master seed.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream);
/// FNV-1a over a cell label, used as a stream id.
std::uint64_t stream_id(std::string_view label);

/// Standard complex normal coefficients on every monomial of the first level.k generators,
/// rescaled to unit L^2 norm.
CliffordElement random_level_element(const SpacePtr& space, FiltrationLevel level, Rng& rng);
/// Hermitian part of a random level element, rescaled to unit L^2 norm.
CliffordElement random_selfadjoint_element(const SpacePtr& space, FiltrationLevel level, Rng& rng);

}  // namespace fqsde
