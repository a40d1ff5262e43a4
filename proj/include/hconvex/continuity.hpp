#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hconvex/certify.hpp"
#include "hconvex/domain.hpp"
#include "hconvex/expr.hpp"
#include "hconvex/funclasses.hpp"
#include "hconvex/modulating.hpp"

namespace hconvex {

struct ControlFnReport {
  SampledFlag nondecreasing;
  SampledFlag inf_to_zero;
  bool is_control = false;
};

// n deltas spaced geometrically from `from` down to `to`.
std::vector<double> geometric_deltas(double from, double to, std::size_t n);

// deltas must be positive, strictly descending, with the last one <= 1e-6.
ControlFnReport control_function_check(const ModulatingFn& h, const std::vector<double>& deltas);

// |f(y) - f(x)| / h(|y - x|); 0/0 is 0 and a zero h at a positive gap is inf.
double pair_ratio(const Expr& f, const ModulatingFn& h, double x, double y);

struct ContinuityRatio {
  double sup_ratio = 0.0;
  std::pair<double, double> witness_pair{0.0, 0.0};
  std::size_t pairs = 0;
  double tau = 0.0;
  bool h_continuous_on_sample = false;
};

// sup of pair_ratio over sampled pairs, largest ratio first and ties to the
// smallest (x, y).
ContinuityRatio h_continuity_ratio(const Expr& f, const ModulatingFn& h, const EvalDomain& d,
                                   std::size_t n_pairs, std::uint64_t seed, const Tolerance& tol = {});

struct HolderFit {
  double H = 0.0;                // 0 for a constant function
  std::optional<double> alpha;   // unset for a constant function
  double rms_log_residual = 0.0;
  bool constant = false;
  std::size_t pairs_used = 0;
  // Fitted upper envelope and the full cloud, both as (log|dx|, log|df|).
  std::vector<std::pair<double, double>> envelope;
  std::vector<std::pair<double, double>> cloud;
};

// Fits log|df| = log H + alpha log|dx| to the upper envelope of the sampled
// pairs: gaps are binned by quarter decade and each bin keeps its largest
// |df|. Pairs with |df| < 1e-15 are dropped.
HolderFit holder_fit(const Expr& f, const EvalDomain& d, std::size_t n_pairs, std::uint64_t seed);

// |y - x| / (eps + |y - x|)
double widened_lambda(double eps, double gap);

struct LambdaSample {
  double x = 0.0;
  double y = 0.0;
  double lambda = 0.0;
};

struct WideningFlags {
  SampledFlag h_alpha_ge_alpha;
  SampledFlag supermultiplicative;
  double h_eps = 0.0;
  double oscillation = 0.0;  // M_eps - m_eps
  double discrepancy = 0.0;  // h(eps) - (M_eps - m_eps), measured only
};

struct WideningProbe {
  double a = 0.0, b = 0.0, eps = 0.0;
  double m_eps = 0.0;
  double M_eps = 0.0;
  std::vector<LambdaSample> lambda_samples;
  ContinuityRatio ratio;
  WideningFlags flags;
};

// Extremes of f over (a - eps, b + eps), then the h-continuity ratio on
// [a, b]. m_eps and M_eps also cover every point used by the pair scan.
WideningProbe widening_probe(const Expr& f, const ModulatingFn& h, std::pair<double, double> inner,
                             double eps, const ScanConfig& cfg);

}  // namespace hconvex
