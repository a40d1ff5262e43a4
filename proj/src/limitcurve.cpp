#include "hconvex/limitcurve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hconvex/errors.hpp"
#include "hconvex/format.hpp"
#include "hconvex/quadrature.hpp"

namespace hconvex {

namespace {

void require_exponent(double s) {
  if (!(s > 0.0 && s <= 1.0)) throw PreconditionError("curve exponent s must lie in (0, 1], got " + format_double(s));
}

void require_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw PreconditionError("lambda must lie in [0, 1], got " + format_double(lambda));
  }
}

void require_finite(double X, double Y) {
  if (!std::isfinite(X) || !std::isfinite(Y)) throw PreconditionError("X and Y must be finite");
}

double pow0(double base, double s) { return base == 0.0 ? 0.0 : std::pow(base, s); }

}  // namespace

double curve_value(double s, double lambda, double X, double Y) {
  require_exponent(s);
  require_lambda(lambda);
  require_finite(X, Y);
  return pow0(lambda, s) * X + pow0(1.0 - lambda, s) * Y;
}

CurveHeight height_max(double s, double X, double Y) {
  require_exponent(s);
  require_finite(X, Y);
  if (X < 0.0 || Y < 0.0) throw PreconditionError("height_max needs X, Y >= 0");
  const auto g = golden_section_max([&](double l) { return curve_value(s, l, X, Y); }, 0.0, 1.0, 1e-12);
  CurveHeight best{g.value, g.argmax};
  // The golden-section point can sit a few ulps below the value at the midpoint.
  for (double end : {0.0, 0.5, 1.0}) {
    const double v = curve_value(s, end, X, Y);
    if (v > best.value) best = {v, end};
  }
  return best;
}

double substituted_length_integrand(double s, double u, double X, double Y) {
  const double lambda = std::pow(u, 1.0 / s);
  // dlambda/du = lambda^(1-s) / s, folded into the square root.
  const double w = std::pow(lambda, 1.0 - s) / s;
  const double ratio = lambda == 0.0 ? 0.0 : std::pow(lambda / (1.0 - lambda), 1.0 - s);
  const double slope_part = X - Y * ratio;
  return std::hypot(w, slope_part);
}

CurveLength curve_length(double s, double X, double Y, double tol) {
  require_exponent(s);
  require_finite(X, Y);
  if (!(tol > 0.0)) throw PreconditionError("curve_length tolerance must be > 0");
  const double upper = std::pow(0.5, s);
  // Left half as is; the right half is the left half of the mirrored curve.
  const auto left = integrate_adaptive([&](double u) { return substituted_length_integrand(s, u, X, Y); }, 0.0,
                                       upper, 0.5 * tol);
  const auto right = integrate_adaptive([&](double u) { return substituted_length_integrand(s, u, Y, X); }, 0.0,
                                        upper, 0.5 * tol);
  CurveLength r;
  r.length = left.value + right.value;
  r.error_estimate = left.error_estimate + right.error_estimate;
  r.converged = left.converged && right.converged && r.error_estimate <= tol;
  return r;
}

double unit_length_integrand(double s, double lambda) {
  require_exponent(s);
  if (!(lambda > 0.0 && lambda < 1.0)) throw PreconditionError("unit_length_integrand needs lambda in (0, 1)");
  const double a = std::pow(lambda, s - 1.0);
  const double b = std::pow(1.0 - lambda, s - 1.0);
  return std::sqrt(1.0 + s * s * a * a + s * s * b * b - 2.0 * s * s * a * b);
}

double inclination(double s, double lambda, double X, double Y) {
  require_exponent(s);
  require_lambda(lambda);
  require_finite(X, Y);
  if (s == 1.0) return X - Y;
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (lambda == 0.0) return X == 0.0 ? -s * Y : std::copysign(inf, X);
  if (lambda == 1.0) return Y == 0.0 ? s * X : std::copysign(inf, -Y);
  return s * std::pow(lambda, s - 1.0) * X - s * std::pow(1.0 - lambda, s - 1.0) * Y;
}

std::string inclination_note(double s, double lambda) {
  if (s < 1.0 && (lambda == 0.0 || lambda == 1.0)) {
    const char* term = lambda == 0.0 ? "lambda^(s-1)" : "(1-lambda)^(s-1)";
    return "slope diverges at lambda=" + format_double(lambda) + " for s < 1 (term " + term + ")";
  }
  return {};
}

}  // namespace hconvex
