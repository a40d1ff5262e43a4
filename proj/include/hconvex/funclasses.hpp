#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hconvex/domain.hpp"
#include "hconvex/expr.hpp"
#include "hconvex/modulating.hpp"

namespace hconvex {

// Violation threshold: tau = abs + rel * (1 + scale), where scale is the
// largest |f| seen by the computation that uses it.
struct Tolerance {
  double abs = 1e-12;
  double rel = 1e-9;

  double tau(double scale) const { return abs + rel * (1.0 + scale); }
};

enum class ClassKind {
  Convex,
  SConvexFirst,          // Orlicz form, weights t and (1 - t^s)^(1/s)
  SConvexFirstPinheiro,  // same weights, bound t^s f(x) + (1 - t^s) f(y)
  SConvexSecond,         // Breckner
  GodunovaLevin,
  PFunction,
  HConvex,
  HConcave,
  HMidconvex,
  HMidconcave,
  HChord,  // geometric form: f(p) <= L(p; h)
};

struct ClassSpec {
  ClassKind kind = ClassKind::Convex;
  double s = 1.0;
  std::optional<ModulatingFn> h;

  static ClassSpec convex() { return {ClassKind::Convex, 1.0, std::nullopt}; }
  static ClassSpec s_convex_first(double s);
  static ClassSpec s_convex_first_pinheiro(double s);
  static ClassSpec s_convex_second(double s);
  static ClassSpec godunova_levin() { return {ClassKind::GodunovaLevin, 1.0, std::nullopt}; }
  static ClassSpec p_function() { return {ClassKind::PFunction, 1.0, std::nullopt}; }
  static ClassSpec h_convex(ModulatingFn h) { return {ClassKind::HConvex, 1.0, std::move(h)}; }
  static ClassSpec h_concave(ModulatingFn h) { return {ClassKind::HConcave, 1.0, std::move(h)}; }
  static ClassSpec h_midconvex(ModulatingFn h) { return {ClassKind::HMidconvex, 1.0, std::move(h)}; }
  static ClassSpec h_midconcave(ModulatingFn h) { return {ClassKind::HMidconcave, 1.0, std::move(h)}; }
  static ClassSpec h_chord(ModulatingFn h) { return {ClassKind::HChord, 1.0, std::move(h)}; }

  std::string name() const;
  bool is_first_sense() const {
    return kind == ClassKind::SConvexFirst || kind == ClassKind::SConvexFirstPinheiro;
  }
  bool is_midpoint() const {
    return kind == ClassKind::HMidconvex || kind == ClassKind::HMidconcave;
  }
  // Classes whose inequality is stated for t in the open interval (0, 1).
  bool open_t() const {
    return kind == ClassKind::GodunovaLevin || kind == ClassKind::HConvex ||
           kind == ClassKind::HConcave;
  }
  bool needs_nonnegative_f() const;
  bool caution_case() const { return h && h->caution_case(); }
};

struct ResidualSample {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
  double lhs = 0.0;  // f at the combination point
  double rhs = 0.0;  // class bound
  double residual = 0.0;  // >= 0 iff the inequality holds here
  double combination_point = 0.0;
  bool in_domain = true;
  bool caution = false;  // h is a Caution case; the sample is still computed
};

// Combination point of a sample; no evaluation of f.
double combination_point(const ClassSpec& c, double x, double y, double t);

ResidualSample class_residual(const Expr& f, const ClassSpec& c, double x, double y, double t,
                              const std::optional<EvalDomain>& domain = std::nullopt);

// Same computation with f(x), f(y) already known; scans use this so that a
// witness re-evaluated through class_residual reproduces bit-for-bit.
ResidualSample class_residual_from_values(const Expr& f, const ClassSpec& c, double x, double y,
                                          double t, double fx, double fy,
                                          const std::optional<EvalDomain>& domain = std::nullopt);

// First-sense inequality with two free weights, no constraint enforced.
struct RawFirstSenseSample {
  ResidualSample sample;
  double constraint_gap = 0.0;  // alpha^s + beta^s - 1
};

RawFirstSenseSample first_sense_raw(const Expr& f, double s, double x, double y, double alpha,
                                    double beta,
                                    const std::optional<EvalDomain>& domain = std::nullopt);

ResidualSample midconvex_residual(const Expr& f, const ModulatingFn& h, double x, double y);

double local_midconvex_residual(const Expr& f, const ModulatingFn& h, double x, double p);

double h_chord(const Expr& f, const ModulatingFn& h, double x, double y, double t);

struct BentChordResult {
  double sup_inner = 0.0;
  double argsup_inner = 0.0;
  double sup_boundary = 0.0;
  double tau = 0.0;
  bool pass = false;
};

// sup over the interior grid of J of (L - f) against the larger of (L - f)
// at J's endpoints, with L the h-chord over `outer`.
BentChordResult bent_chord_test(const Expr& f, const ModulatingFn& h, const EvalDomain& J,
                                std::pair<double, double> outer, std::size_t n,
                                const Tolerance& tol = {});

enum class Sense { First, Second };

// 2^-1 - 2^(-1/s) for the first sense, 2^-s - 2^-1 for the second.
double min_domain_distance(Sense sense, double s);

enum class FlagState { Pass, Fail, Indeterminate };

const char* to_string(FlagState s);

// Sampled evidence for a property of h; never a proof.
struct SampledFlag {
  FlagState state = FlagState::Indeterminate;
  double worst_margin = 0.0;    // most negative slack seen (>= 0 means held everywhere)
  std::vector<double> witness;  // argument(s) of the worst margin
  std::size_t samples = 0;
  std::string grid;             // description of the sampled grid
  std::string note;
};

struct HPropertyFlags {
  SampledFlag nonneg;
  SampledFlag nondecreasing;
  SampledFlag h_alpha_ge_alpha;
  SampledFlag h_alpha_le_alpha;
  SampledFlag h_sum_le_one;
  SampledFlag supermultiplicative;
  SampledFlag control_function;
  std::optional<double> h_zero_plus;  // h(1e-9)
  std::optional<double> h_one;        // h(1)
};

inline constexpr double kEndpointInset = 1e-9;

HPropertyFlags h_property_check(const ModulatingFn& h, std::size_t grid,
                                std::size_t pair_grid = 33);

}  // namespace hconvex
