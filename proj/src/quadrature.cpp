#include "hconvex/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "hconvex/errors.hpp"

namespace hconvex {

namespace {

// Kronrod abscissae on [0, 1) (odd indices are the Gauss points) and weights.
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kKronrod[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kGauss[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                              0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
};

Panel gk15(const std::function<double(double)>& fn, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = fn(mid);
  double kronrod = kKronrod[7] * fc;
  double gauss = kGauss[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kNodes[i];
    const double sum = fn(mid - dx) + fn(mid + dx);
    kronrod += kKronrod[i] * sum;
    if (i % 2 == 1) gauss += kGauss[i / 2] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

struct LargerError {
  bool operator()(const Panel& p, const Panel& q) const {
    if (p.error != q.error) return p.error < q.error;
    return p.a > q.a;
  }
};

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& fn, double a, double b, double tol,
                              std::size_t max_intervals) {
  if (!(tol > 0.0)) throw PreconditionError("quadrature tolerance must be > 0");
  if (!(a <= b)) throw PreconditionError("quadrature needs a <= b");
  QuadResult r;
  if (a == b) {
    r.converged = true;
    return r;
  }
  std::priority_queue<Panel, std::vector<Panel>, LargerError> queue;
  queue.push(gk15(fn, a, b));
  double total_error = queue.top().error;
  while (total_error > tol && queue.size() < max_intervals) {
    const Panel worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) break;  // cannot split further
    queue.pop();
    const Panel left = gk15(fn, worst.a, mid);
    const Panel right = gk15(fn, mid, worst.b);
    queue.push(left);
    queue.push(right);
    total_error += left.error + right.error - worst.error;
  }

  std::vector<Panel> panels;
  panels.reserve(queue.size());
  while (!queue.empty()) {
    panels.push_back(queue.top());
    queue.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& p, const Panel& q) { return p.a < q.a; });
  for (const Panel& p : panels) {
    r.value += p.value;
    r.error_estimate += p.error;
  }
  r.intervals = panels.size();
  r.converged = r.error_estimate <= tol;
  return r;
}

GoldenResult golden_section_max(const std::function<double(double)>& fn, double a, double b, double tol) {
  if (!(a < b) || !(tol > 0.0)) throw PreconditionError("golden_section_max needs a < b and tol > 0");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fn(c), fd = fn(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
    if (!(c < d)) break;  // bracket collapsed to adjacent doubles
  }
  const double x = 0.5 * (a + b);
  return {x, fn(x)};
}

}  // namespace hconvex
