#include "hconvex/continuity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <tuple>

#include "hconvex/errors.hpp"
#include "hconvex/format.hpp"
#include "hconvex/sampling.hpp"

namespace hconvex {

std::vector<double> geometric_deltas(double from, double to, std::size_t n) {
  if (!(from > to && to > 0.0) || n < 2) {
    throw PreconditionError("geometric_deltas needs from > to > 0 and n >= 2");
  }
  std::vector<double> out(n);
  const double step = std::log(to / from) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = from * std::exp(step * static_cast<double>(i));
  out.front() = from;
  out.back() = to;
  return out;
}

ControlFnReport control_function_check(const ModulatingFn& h, const std::vector<double>& deltas) {
  if (deltas.empty()) throw PreconditionError("control_function_check needs deltas");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0)) throw PreconditionError("deltas must be positive");
    if (i > 0 && !(deltas[i] < deltas[i - 1])) throw PreconditionError("deltas must be sorted descending");
  }
  if (deltas.back() > 1e-6) throw PreconditionError("smallest delta must be <= 1e-6");

  ControlFnReport r;
  const std::string grid = std::to_string(deltas.size()) + " deltas from " + format_double(deltas.front()) +
                           " to " + format_double(deltas.back());
  r.nondecreasing.grid = grid;
  r.inf_to_zero.grid = grid;

  std::vector<double> hs(deltas.size());
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    try {
      hs[i] = h(deltas[i]);
    } catch (const DomainError& e) {
      for (SampledFlag* flag : {&r.nondecreasing, &r.inf_to_zero}) {
        flag->state = FlagState::Indeterminate;
        flag->witness = {deltas[i]};
        flag->note = e.what();
      }
      return r;
    }
  }

  // Consecutive pairs: h(smaller delta) must not exceed h(larger delta).
  bool monotone = true;
  for (std::size_t i = 1; i < deltas.size(); ++i) {
    const double slack = hs[i - 1] - hs[i];
    ++r.nondecreasing.samples;
    if (r.nondecreasing.samples == 1 || slack < r.nondecreasing.worst_margin) {
      r.nondecreasing.worst_margin = slack;
      r.nondecreasing.witness = {deltas[i], deltas[i - 1]};
    }
    if (slack < -1e-12 * (1.0 + std::abs(hs[i - 1]))) monotone = false;
  }
  r.nondecreasing.state = monotone ? FlagState::Pass : FlagState::Fail;

  r.inf_to_zero.samples = deltas.size();
  r.inf_to_zero.worst_margin = 1e-3 - hs.back();
  r.inf_to_zero.witness = {deltas.back()};
  r.inf_to_zero.note = "h(" + format_double(deltas.back()) + ") = " + format_double(hs.back());
  r.inf_to_zero.state = (hs.back() <= 1e-3 && monotone) ? FlagState::Pass : FlagState::Fail;

  r.is_control = r.nondecreasing.state == FlagState::Pass && r.inf_to_zero.state == FlagState::Pass;
  return r;
}

namespace {

double ratio_from_values(double fx, double fy, double hv) {
  const double df = std::abs(fy - fx);
  if (df == 0.0) return 0.0;
  if (hv == 0.0) return std::numeric_limits<double>::infinity();
  return df / hv;
}

}  // namespace

double pair_ratio(const Expr& f, const ModulatingFn& h, double x, double y) {
  return ratio_from_values(f(x), f(y), h(std::abs(y - x)));
}

ContinuityRatio h_continuity_ratio(const Expr& f, const ModulatingFn& h, const EvalDomain& d,
                                   std::size_t n_pairs, std::uint64_t seed, const Tolerance& tol) {
  if (n_pairs < 1) throw PreconditionError("h_continuity_ratio needs n_pairs >= 1");
  ContinuityRatio r;
  double max_abs_f = 0.0;
  bool have = false;
  for (const auto& [x, y] : sample_pairs(d, n_pairs, seed, 1e-6)) {
    const double fx = f(x), fy = f(y);
    max_abs_f = std::max({max_abs_f, std::abs(fx), std::abs(fy)});
    const double ratio = ratio_from_values(fx, fy, h(std::abs(y - x)));
    ++r.pairs;
    const bool better = !have || ratio > r.sup_ratio ||
                        (ratio == r.sup_ratio && std::tie(x, y) < std::tie(r.witness_pair.first, r.witness_pair.second));
    if (better) {
      r.sup_ratio = ratio;
      r.witness_pair = {x, y};
      have = true;
    }
  }
  r.tau = tol.tau(max_abs_f);
  r.h_continuous_on_sample = r.sup_ratio <= 1.0 + r.tau;
  return r;
}

HolderFit holder_fit(const Expr& f, const EvalDomain& d, std::size_t n_pairs, std::uint64_t seed) {
  if (n_pairs < 8) throw PreconditionError("holder_fit needs n_pairs >= 8");
  constexpr double kMinGapFraction = 1e-3;
  constexpr int kBinsPerDecade = 4;
  constexpr int kBins = 3 * kBinsPerDecade;

  const auto pairs = sample_pairs(d, n_pairs, seed, kMinGapFraction);
  // Same span as sample_pairs, which insets open endpoints.
  const double width = d.hi - d.lo;
  const double span = (d.open_hi ? d.hi - 1e-9 * width : d.hi) - (d.open_lo ? d.lo + 1e-9 * width : d.lo);
  const double gmin = kMinGapFraction * span;

  HolderFit fit;
  std::array<std::optional<std::pair<double, double>>, kBins> best;
  for (const auto& [x, y] : pairs) {
    const double dx = y - x;
    const double df = std::abs(f(y) - f(x));
    if (df < 1e-15 || dx <= 0.0) continue;
    const double ldx = std::log(dx), ldf = std::log(df);
    fit.cloud.emplace_back(ldx, ldf);
    ++fit.pairs_used;
    const int bin = std::clamp(static_cast<int>(std::floor(std::log10(dx / gmin) * kBinsPerDecade)), 0, kBins - 1);
    if (!best[bin] || ldf > best[bin]->second) best[bin] = std::make_pair(ldx, ldf);
  }
  if (fit.pairs_used == 0) {
    fit.constant = true;
    return fit;
  }
  for (const auto& b : best) {
    if (b) fit.envelope.push_back(*b);
  }
  if (fit.envelope.size() < 2) {
    throw PreconditionError("holder_fit: sampled gaps span a single bin; widen the domain or add pairs");
  }

  double sx = 0, sy = 0;
  for (const auto& [px, py] : fit.envelope) {
    sx += px;
    sy += py;
  }
  const double n = static_cast<double>(fit.envelope.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [px, py] : fit.envelope) {
    sxx += (px - mx) * (px - mx);
    sxy += (px - mx) * (py - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double sse = 0;
  for (const auto& [px, py] : fit.envelope) {
    const double e = py - (intercept + slope * px);
    sse += e * e;
  }
  fit.alpha = slope;
  fit.H = std::exp(intercept);
  fit.rms_log_residual = std::sqrt(sse / n);
  return fit;
}

double widened_lambda(double eps, double gap) { return gap / (eps + gap); }

WideningProbe widening_probe(const Expr& f, const ModulatingFn& h, std::pair<double, double> inner,
                             double eps, const ScanConfig& cfg) {
  cfg.validate();
  const auto [a, b] = inner;
  if (!(a < b)) throw PreconditionError("inner interval needs a < b");
  if (!(eps > 0.0)) throw PreconditionError("eps must be > 0");

  WideningProbe p;
  p.a = a;
  p.b = b;
  p.eps = eps;

  // Open widened interval, inset relative to its width.
  const double lo = a - eps, hi = b + eps;
  const double inset = 1e-9 * (hi - lo);
  p.m_eps = std::numeric_limits<double>::infinity();
  p.M_eps = -std::numeric_limits<double>::infinity();
  const auto note = [&](double v) {
    p.m_eps = std::min(p.m_eps, v);
    p.M_eps = std::max(p.M_eps, v);
  };
  for (double x : grid_points(EvalDomain::closed(lo + inset, hi - inset), 2 * cfg.n_xy + 1)) note(f(x));

  const std::size_t n_pairs = cfg.n_xy * (cfg.n_xy - 1) / 2 + cfg.random_pairs;
  const auto pairs = sample_pairs(EvalDomain::closed(a, b), n_pairs, cfg.seed, 1e-6);
  for (const auto& [x, y] : pairs) {
    note(f(x));
    note(f(y));
    p.lambda_samples.push_back({x, y, widened_lambda(eps, std::abs(y - x))});
  }
  p.ratio = h_continuity_ratio(f, h, EvalDomain::closed(a, b), n_pairs, cfg.seed, cfg.tol);

  const auto hflags = h_property_check(h, 101);
  p.flags.h_alpha_ge_alpha = hflags.h_alpha_ge_alpha;
  p.flags.supermultiplicative = hflags.supermultiplicative;
  p.flags.h_eps = h(eps);
  p.flags.oscillation = p.M_eps - p.m_eps;
  p.flags.discrepancy = p.flags.h_eps - p.flags.oscillation;
  return p;
}

}  // namespace hconvex
