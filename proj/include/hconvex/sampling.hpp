#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "hconvex/domain.hpp"

namespace hconvex {

// Uniform double in [0, 1) from the top 53 bits; identical on every platform,
// unlike std::uniform_real_distribution.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Sampled (x, y) pairs with x < y, used by the continuity estimators.
//
// Structured part (about half of n_pairs): pairs anchored at each endpoint of
// d with geometrically spaced gaps in [min_gap, width], then all pairs of a
// uniform grid. Random part: seeded uniform left point with a log-uniform gap
// in [min_gap, width]. min_gap = min_gap_fraction * width.
std::vector<std::pair<double, double>> sample_pairs(const EvalDomain& d, std::size_t n_pairs,
                                                    std::uint64_t seed, double min_gap_fraction);

}  // namespace hconvex
