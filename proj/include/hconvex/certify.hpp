#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hconvex/domain.hpp"
#include "hconvex/expr.hpp"
#include "hconvex/funclasses.hpp"

namespace hconvex {

struct ScanConfig {
  std::size_t n_xy = 51;  // grid points per endpoint axis
  std::size_t n_t = 51;   // combination grid
  Tolerance tol;
  std::uint64_t seed = 0;
  std::size_t random_pairs = 0;  // extra seeded (x, y) pairs on top of the grid
  bool refine = false;
  std::size_t refine_rounds = 30;
  unsigned threads = 1;

  void validate() const;
};

enum class VerdictStatus { CertifiedOnGrid, Refuted, Indeterminate };

const char* to_string(VerdictStatus s);

struct EvalFailure {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
  double point = 0.0;  // where f (or h) failed
  std::string message;
};

// "certified_on_grid" means no violation was found among the samples; it is
// evidence, not a proof of membership.
struct Verdict {
  std::string class_name;
  VerdictStatus status = VerdictStatus::Indeterminate;
  double worst_residual = 0.0;
  std::optional<ResidualSample> witness;
  std::size_t evaluations = 0;
  std::size_t out_of_domain_count = 0;  // first-sense points outside [x, y] or the domain
  std::size_t skipped_count = 0;        // points outside the domain, not evaluated
  double tau = 0.0;
  double max_abs_f = 0.0;
  double min_f = 0.0;
  std::optional<EvalFailure> failure;
  std::vector<std::string> warnings;
};

// Residuals over all grid pairs x < y (plus cfg.random_pairs seeded pairs)
// and the t grid. Parallel and serial runs give identical verdicts.
Verdict scan_class(const Expr& f, const ClassSpec& c, const EvalDomain& d, const ScanConfig& cfg);

struct RefineResult {
  ResidualSample sample;
  std::size_t accepted_moves = 0;
  bool evaluation_error = false;
  std::string note;
};

// Coordinate descent with step halving around a violating sample. Never
// returns a sample with a larger residual than the input.
RefineResult refine_witness(const Expr& f, const ClassSpec& c, const ResidualSample& w,
                            std::size_t rounds, const EvalDomain& d);

struct MidconvexityResult {
  bool concave = false;
  Verdict mid_verdict;
  Verdict full_verdict;
  bool agree = false;
  SampledFlag h_vs_alpha;  // h(a) >= a (convex mode) or h(a) <= a (concave mode)
  bool f_continuous_on_grid = false;
  bool f_nonnegative = false;
};

MidconvexityResult midconvexity_probe(const Expr& f, const ModulatingFn& h, const EvalDomain& d,
                              const ScanConfig& cfg, bool concave = false);

struct SecondDerivativeResult {
  double inf_value = 0.0;
  double argmin = 0.0;
  double max_abs_f = 0.0;
  double min_delta = 0.0;
  std::optional<EvalFailure> failure;
};

// Central second differences with delta = fd_step * (1 + |x|) at n interior
// points of d.
SecondDerivativeResult second_derivative_inf(const Expr& f, const EvalDomain& d, std::size_t n,
                                             double fd_step = 1e-4);

struct ConjectureResult {
  double h_half = 0.0;
  double threshold = 0.0;  // 1 - 2 h(1/2)
  SecondDerivativeResult second_derivative;
  double tau = 0.0;
  bool derivative_side = false;
  Verdict hconvex_side;
  bool consistent = false;
};

// Reports both sides of "f'' >= 1 - 2h(1/2)" against an h-convexity scan.
// Never asserts the conjecture.
ConjectureResult conjecture_probe(const Expr& f, const ModulatingFn& h, const EvalDomain& d,
                                  const ScanConfig& cfg, double fd_step = 1e-4);

}  // namespace hconvex
