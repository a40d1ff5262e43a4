#pragma once

#include <string>

namespace hconvex {

// The limiting curve value(lambda) = lambda^s X + (1 - lambda)^s Y on [0, 1],
// with 0^s = 0. X and Y play the roles of f(x) and f(y).
double curve_value(double s, double lambda, double X, double Y);

struct CurveHeight {
  double value = 0.0;
  double argmax = 0.0;
};

// Golden-section maximum over [0, 1] (tolerance 1e-12), compared against the
// values at 0, 1/2 and 1. Requires X, Y >= 0.
CurveHeight height_max(double s, double X, double Y);

struct CurveLength {
  double length = 0.0;
  double error_estimate = 0.0;
  bool converged = false;  // false when the interval budget ran out first
};

// Arc length of the curve over [0, 1]. Each half is integrated after the
// substitution lambda = u^(1/s), which removes the endpoint singularity of
// the slope when s < 1.
CurveLength curve_length(double s, double X, double Y, double tol);

// Arc-length integrand in u on the left half, lambda = u^(1/s). Bounded on
// [0, 0.5^s]; exposed for the test oracle.
double substituted_length_integrand(double s, double u, double X, double Y);

// sqrt(1 + s^2 l^(2s-2) + s^2 (1-l)^(2s-2) - 2 s^2 l^(s-1) (1-l)^(s-1)):
// the arc-length integrand with X = Y = 1 written out. Open lambda only.
double unit_length_integrand(double s, double lambda);

// Slope of the curve. For s < 1 the slope diverges at lambda = 0 and 1; the
// one-sided limit is returned (signed infinity unless the diverging term has
// a zero coefficient).
double inclination(double s, double lambda, double X, double Y);

// Explanation attached to an infinite inclination, empty otherwise.
std::string inclination_note(double s, double lambda);

}  // namespace hconvex
