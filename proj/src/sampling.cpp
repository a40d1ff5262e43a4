#include "hconvex/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "hconvex/errors.hpp"

namespace hconvex {

std::vector<std::pair<double, double>> sample_pairs(const EvalDomain& d, std::size_t n_pairs,
                                                    std::uint64_t seed, double min_gap_fraction) {
  if (n_pairs == 0) throw PreconditionError("need at least one sampled pair");
  if (!(min_gap_fraction > 0.0 && min_gap_fraction < 1.0)) {
    throw PreconditionError("min_gap_fraction must lie in (0, 1)");
  }
  // Open endpoints are honoured by a relative inset.
  const double width = d.hi - d.lo;
  const double lo = d.open_lo ? d.lo + 1e-9 * width : d.lo;
  const double hi = d.open_hi ? d.hi - 1e-9 * width : d.hi;
  const double span = hi - lo;
  const double min_gap = min_gap_fraction * span;

  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(n_pairs);

  // Anchored pairs, a quarter of the budget on each side.
  const std::size_t anchored = n_pairs / 4;
  const double log_ratio = std::log(span / min_gap);
  for (std::size_t k = 0; k < anchored; ++k) {
    const double u = anchored == 1 ? 1.0 : static_cast<double>(k) / static_cast<double>(anchored - 1);
    const double gap = k + 1 == anchored ? span : min_gap * std::exp(u * log_ratio);
    pairs.emplace_back(lo, k + 1 == anchored ? hi : lo + gap);
  }
  for (std::size_t k = 0; k < anchored; ++k) {
    const double u = anchored == 1 ? 1.0 : static_cast<double>(k) / static_cast<double>(anchored - 1);
    const double gap = k + 1 == anchored ? span : min_gap * std::exp(u * log_ratio);
    pairs.emplace_back(k + 1 == anchored ? lo : hi - gap, hi);
  }

  // All pairs of an m-point grid, m(m-1)/2 <= n_pairs / 4.
  std::size_t m = 1;
  while ((m + 1) * m / 2 <= n_pairs / 4) ++m;
  if (m >= 2) {
    const auto grid = grid_points(EvalDomain::closed(lo, hi), m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(grid[i], grid[j]);
    }
  }

  std::mt19937_64 rng(seed);
  while (pairs.size() < n_pairs) {
    const double gap = min_gap * std::exp(unit_uniform(rng) * log_ratio);
    const double x = lo + unit_uniform(rng) * (span - gap);
    pairs.emplace_back(x, std::min(x + gap, hi));
  }
  return pairs;
}

}  // namespace hconvex
