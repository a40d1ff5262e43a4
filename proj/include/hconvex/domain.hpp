#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hconvex {

struct EvalDomain {
  double lo = 0.0;
  double hi = 1.0;
  bool open_lo = false;
  bool open_hi = false;

  static EvalDomain closed(double lo, double hi) { return {lo, hi, false, false}; }
  static EvalDomain open(double lo, double hi) { return {lo, hi, true, true}; }

  bool contains(double v) const;
  double width() const { return hi - lo; }
  // Standing assumption of the h-convex setting: the interval lies in (0, inf).
  bool inside_positive_axis() const { return lo > 0.0 || (lo == 0.0 && open_lo); }

  // "lo:hi", optionally prefixed by '(' or '[' and suffixed by ')' or ']'.
  static EvalDomain parse(std::string_view text);
  std::string to_string() const;
};

// n uniformly spaced points over d. An open endpoint is dropped from the grid
// of n + (#open endpoints) points, i.e. inset by exactly one grid step.
// Interior points are computed as lo + (hi - lo) * (i / m) so that dyadic
// fractions such as 0.25 and 0.5 land exactly.
std::vector<double> grid_points(const EvalDomain& d, std::size_t n);

}  // namespace hconvex
