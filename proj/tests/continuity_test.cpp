#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hconvex/continuity.hpp"
#include "hconvex/errors.hpp"

using namespace hconvex;

namespace {
const EvalDomain kUnit = EvalDomain::closed(0, 1);
}

TEST(ControlFunction, Examples) {
  const auto deltas = geometric_deltas(1.0, 1e-9, 91);
  ASSERT_EQ(deltas.front(), 1.0);
  ASSERT_EQ(deltas.back(), 1e-9);

  const auto root = control_function_check(ModulatingFn::power(0.5), deltas);
  EXPECT_EQ(root.nondecreasing.state, FlagState::Pass);
  EXPECT_EQ(root.inf_to_zero.state, FlagState::Pass);
  EXPECT_TRUE(root.is_control);

  const auto one = control_function_check(ModulatingFn::one(), deltas);
  EXPECT_EQ(one.nondecreasing.state, FlagState::Pass);
  EXPECT_EQ(one.inf_to_zero.state, FlagState::Fail);
  EXPECT_FALSE(one.is_control);

  const auto rec = control_function_check(ModulatingFn::reciprocal(), deltas);
  EXPECT_EQ(rec.nondecreasing.state, FlagState::Fail);
  EXPECT_FALSE(rec.is_control);
}

TEST(ControlFunction, Preconditions) {
  const auto h = ModulatingFn::identity();
  EXPECT_THROW(control_function_check(h, {}), PreconditionError);
  EXPECT_THROW(control_function_check(h, {1.0, 1e-3}), PreconditionError);
  EXPECT_THROW(control_function_check(h, {1e-7, 1.0}), PreconditionError);
  EXPECT_THROW(control_function_check(h, {1.0, -1e-7}), PreconditionError);
}

TEST(ControlFunction, EvaluationErrorIsIndeterminate) {
  const auto r = control_function_check(ModulatingFn::parse("expr:log(t)+30"), {1.0, 1e-7, 0.0 + 1e-300});
  EXPECT_EQ(r.nondecreasing.state, FlagState::Pass);
  const auto bad = control_function_check(ModulatingFn::parse("expr:sqrt(t-1e-8)"), {1.0, 1e-7, 1e-9});
  EXPECT_EQ(bad.nondecreasing.state, FlagState::Indeterminate);
  EXPECT_EQ(bad.inf_to_zero.state, FlagState::Indeterminate);
  EXPECT_FALSE(bad.is_control);
}

TEST(Property, PowerFunctionsAreControlFunctions) {
  // t^s tends to 0 only slowly for small s, so the deltas go far down.
  const auto deltas = geometric_deltas(1.0, 1e-300, 301);
  for (double s : {0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
    const auto r = control_function_check(ModulatingFn::power(s), deltas);
    EXPECT_TRUE(r.is_control) << s;
    EXPECT_EQ(r.is_control,
              r.nondecreasing.state == FlagState::Pass && r.inf_to_zero.state == FlagState::Pass);
  }
}

TEST(ContinuityRatio, IdentityOnLine) {
  const auto r = h_continuity_ratio(Expr::parse("t"), ModulatingFn::identity(), kUnit, 500, 1);
  EXPECT_NEAR(r.sup_ratio, 1.0, 1e-9);
  EXPECT_TRUE(r.h_continuous_on_sample);
}

TEST(ContinuityRatio, SqrtAgainstPowerHalf) {
  // Oracle: all pairs of a 2001-point grid.
  const int m = 2000;
  double oracle = 0.0;
  for (int i = 0; i <= m; ++i) {
    for (int j = i + 1; j <= m; ++j) {
      const double x = double(i) / m, y = double(j) / m;
      oracle = std::max(oracle, (std::sqrt(y) - std::sqrt(x)) / std::sqrt(y - x));
    }
  }
  ASSERT_NEAR(oracle, 1.0, 1e-12);

  const auto r = h_continuity_ratio(Expr::parse("sqrt(t)"), ModulatingFn::power(0.5), kUnit, 2000, 3);
  EXPECT_NEAR(r.sup_ratio, 1.0, 1e-9);
  EXPECT_EQ(r.witness_pair.first, 0.0);
  EXPECT_TRUE(r.h_continuous_on_sample);
}

TEST(ContinuityRatio, SqrtIsNotLipschitz) {
  // Grid oracle: the worst pair is (0, 1/m) with ratio sqrt(m).
  double prev = 0.0;
  for (int m : {10, 100, 1000}) {
    double oracle = 0.0;
    for (int j = 1; j <= m; ++j) oracle = std::max(oracle, std::sqrt(double(j) / m) / (double(j) / m));
    EXPECT_GT(oracle, prev);
    prev = oracle;
  }
  const auto r = h_continuity_ratio(Expr::parse("sqrt(t)"), ModulatingFn::identity(), kUnit, 2000, 3);
  EXPECT_GT(r.sup_ratio, prev);
  EXPECT_NEAR(r.sup_ratio, 1.0 / std::sqrt(1e-6), 1e-6);
  EXPECT_FALSE(r.h_continuous_on_sample);

  const auto shrunk = h_continuity_ratio(Expr::parse("sqrt(t)"), ModulatingFn::identity(),
                                         EvalDomain::closed(0, 1e-2), 2000, 3);
  EXPECT_GT(shrunk.sup_ratio, r.sup_ratio);
}

TEST(ContinuityRatio, ZeroModulusGivesInfinity) {
  const auto r = h_continuity_ratio(Expr::parse("t"), ModulatingFn::parse("expr:0*t"), kUnit, 20, 1);
  EXPECT_TRUE(std::isinf(r.sup_ratio));
  EXPECT_EQ(pair_ratio(Expr::parse("5"), ModulatingFn::parse("expr:0*t"), 0.1, 0.2), 0.0);
}

TEST(Property, PairRatioIsSymmetric) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const char* text : {"t^2", "sqrt(t)", "exp(t)", "sin(3*t)"}) {
    const Expr f = Expr::parse(text);
    for (const auto& h : {ModulatingFn::identity(), ModulatingFn::power(0.5), ModulatingFn::power(1.5)}) {
      for (int k = 0; k < 200; ++k) {
        const double x = u(rng), y = u(rng);
        if (x == y) continue;
        EXPECT_EQ(pair_ratio(f, h, x, y), pair_ratio(f, h, y, x));
      }
    }
  }
}

TEST(HolderFit, SqrtNearHalf) {
  // Closed-form envelope sqrt(a + g) - sqrt(a) regressed over the sampled
  // gap range [1e-3 span, span] gives slope 0.537.
  const double a = 1e-4, span = 1 - a;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    const double g = std::exp(std::log(1e-3 * span) + i * std::log(1e3) / (n - 1));
    const double lx = std::log(g), ly = std::log(std::sqrt(a + g) - std::sqrt(a));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double oracle = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  const auto fit = holder_fit(Expr::parse("sqrt(t)"), EvalDomain::closed(1e-4, 1), 2000, 0);
  ASSERT_TRUE(fit.alpha);
  EXPECT_GE(*fit.alpha, 0.45);
  EXPECT_LE(*fit.alpha, 0.55);
  EXPECT_NEAR(*fit.alpha, oracle, 0.02);
  EXPECT_FALSE(fit.constant);
  EXPECT_EQ(fit.cloud.size(), fit.pairs_used);
}

TEST(HolderFit, LipschitzLine) {
  for (const auto& d : {kUnit, EvalDomain::closed(-5, 2), EvalDomain::closed(100, 101)}) {
    const auto fit = holder_fit(Expr::parse("3*t"), d, 2000, 7);
    ASSERT_TRUE(fit.alpha);
    EXPECT_NEAR(*fit.alpha, 1.0, 0.01);
    EXPECT_NEAR(fit.H, 3.0, 0.15);
  }
}

TEST(HolderFit, ConstantSentinel) {
  const auto fit = holder_fit(Expr::parse("5"), kUnit, 100, 0);
  EXPECT_TRUE(fit.constant);
  EXPECT_EQ(fit.H, 0.0);
  EXPECT_FALSE(fit.alpha);
  EXPECT_THROW(holder_fit(Expr::parse("t"), kUnit, 7, 0), PreconditionError);
}

TEST(Widening, LambdaFormula) {
  EXPECT_EQ(widened_lambda(0.1, 0.2), 2.0 / 3.0);
}

TEST(Widening, ParabolaExtremes) {
  const auto p = widening_probe(Expr::parse("t^2"), ModulatingFn::power(0.5), {0.1, 0.9}, 0.05, ScanConfig{});
  // The open interval is sampled with a 1e-9 relative inset.
  EXPECT_NEAR(p.m_eps, 0.05 * 0.05, 1e-8);
  EXPECT_NEAR(p.M_eps, 0.95 * 0.95, 1e-8);
  EXPECT_TRUE(std::isfinite(p.ratio.sup_ratio));
  EXPECT_EQ(p.flags.supermultiplicative.state, FlagState::Pass);
  EXPECT_EQ(p.flags.h_alpha_ge_alpha.state, FlagState::Pass);
  EXPECT_DOUBLE_EQ(p.flags.discrepancy, std::sqrt(0.05) - (p.M_eps - p.m_eps));

  // Pair-scan oracle on a dense grid of [0.1, 0.9].
  double oracle = 0.0;
  const int m = 1000;
  for (int i = 0; i <= m; ++i) {
    for (int j = i + 1; j <= m; ++j) {
      const double x = 0.1 + 0.8 * i / m, y = 0.1 + 0.8 * j / m;
      oracle = std::max(oracle, (y * y - x * x) / std::sqrt(y - x));
    }
  }
  EXPECT_GE(p.ratio.sup_ratio, oracle - 1e-9);
  EXPECT_LE(p.ratio.sup_ratio, oracle * 1.01);
}

TEST(Widening, IdentityLineRatioIsOne) {
  const auto p = widening_probe(Expr::parse("t"), ModulatingFn::identity(), {0.2, 0.8}, 0.1, ScanConfig{});
  EXPECT_NEAR(p.ratio.sup_ratio, 1.0, 1e-9);
  for (const auto& s : p.lambda_samples) {
    EXPECT_EQ(s.lambda, widened_lambda(0.1, std::abs(s.y - s.x)));
  }
}

TEST(Property, WideningExtremesBracketSamples) {
  for (const char* text : {"t^2", "sin(5*t)", "-(t-0.5)^2", "exp(-t)"}) {
    const Expr f = Expr::parse(text);
    const auto p = widening_probe(f, ModulatingFn::identity(), {0.1, 0.9}, 0.05, ScanConfig{});
    for (const auto& s : p.lambda_samples) {
      for (double v : {f(s.x), f(s.y)}) {
        EXPECT_LE(p.m_eps, v);
        EXPECT_GE(p.M_eps, v);
      }
    }
    for (double x : grid_points(EvalDomain::open(0.05, 0.95), 97)) {
      EXPECT_LE(p.m_eps, f(x) + 1e-6);
      EXPECT_GE(p.M_eps, f(x) - 1e-6);
    }
  }
}

TEST(Widening, Preconditions) {
  EXPECT_THROW(widening_probe(Expr::parse("t"), ModulatingFn::identity(), {0.5, 0.5}, 0.1, ScanConfig{}),
               PreconditionError);
  EXPECT_THROW(widening_probe(Expr::parse("t"), ModulatingFn::identity(), {0.1, 0.5}, 0.0, ScanConfig{}),
               PreconditionError);
  EXPECT_THROW(widening_probe(Expr::parse("log(t)"), ModulatingFn::identity(), {0.05, 0.5}, 0.1, ScanConfig{}),
               DomainError);
}
