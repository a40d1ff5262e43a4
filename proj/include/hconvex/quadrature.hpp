#pragma once

#include <cstddef>
#include <functional>

namespace hconvex {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t intervals = 0;
  bool converged = false;
};

// Adaptive Gauss-Kronrod 7/15 on [a, b]. The interval with the largest error
// is split until the summed error is <= tol or max_intervals is reached.
// Interval contributions are summed in left-endpoint order, so the result
// does not depend on the order in which the work queue was processed.
QuadResult integrate_adaptive(const std::function<double(double)>& fn, double a, double b, double tol,
                              std::size_t max_intervals = 4000);

struct GoldenResult {
  double argmax = 0.0;
  double value = 0.0;
};

// Golden-section search for the maximum of a unimodal fn on [a, b], stopping
// when the bracket is narrower than tol.
GoldenResult golden_section_max(const std::function<double(double)>& fn, double a, double b, double tol);

}  // namespace hconvex
