#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hconvex/errors.hpp"
#include "hconvex/funclasses.hpp"

using namespace hconvex;

namespace {

const Expr kSquare = Expr::parse("t^2");

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST(ClassResidual, Examples) {
  EXPECT_DOUBLE_EQ(class_residual(kSquare, ClassSpec::convex(), 0, 1, 0.5).residual, 0.25);

  const auto s2 = class_residual(kSquare, ClassSpec::s_convex_second(0.5), 0, 1, 0.5);
  EXPECT_NEAR(s2.rhs, 0.70711, 1e-5);
  EXPECT_NEAR(s2.residual, 0.45711, 1e-5);

  const auto gl = class_residual(Expr::parse("1"), ClassSpec::godunova_levin(), 0.2, 0.8, 0.5);
  EXPECT_EQ(gl.rhs, 4.0);
  EXPECT_EQ(gl.residual, 3.0);

  const auto pf = class_residual(Expr::parse("1"), ClassSpec::p_function(), 0.2, 0.8, 0.3);
  EXPECT_EQ(pf.residual, 1.0);
}

TEST(ClassResidual, GodunovaLevinRejectsClosedEndpoints) {
  EXPECT_THROW(class_residual(kSquare, ClassSpec::godunova_levin(), 0.2, 0.8, 0.0), PreconditionError);
  EXPECT_THROW(class_residual(kSquare, ClassSpec::godunova_levin(), 0.2, 0.8, 1.0), PreconditionError);
}

TEST(ClassResidual, PropagatesDomainErrors) {
  EXPECT_THROW(class_residual(Expr::parse("log(t)"), ClassSpec::convex(), 0, 1, 0.5), DomainError);
}

TEST(ClassResidual, ParameterValidation) {
  EXPECT_THROW(ClassSpec::s_convex_second(0.0), PreconditionError);
  EXPECT_THROW(ClassSpec::s_convex_first(1.5), PreconditionError);
  EXPECT_THROW(class_residual(kSquare, ClassSpec::convex(), 0, 1, 1.5), PreconditionError);
  ClassSpec missing_h{ClassKind::HConvex};
  EXPECT_THROW(class_residual(kSquare, missing_h, 0, 1, 0.5), PreconditionError);
}

TEST(FirstSense, PinheiroAbandonmentExample) {
  const auto raw = first_sense_raw(kSquare, 0.5, 0.25, 0.25, 0.5, 1.0, EvalDomain::closed(0, 1));
  EXPECT_EQ(raw.sample.combination_point, 0.375);
  EXPECT_FALSE(raw.sample.in_domain);
  EXPECT_GT(raw.constraint_gap, 0.0);

  // With the constraint honored the combination point of the lambda form can
  // still leave [x, y]: 0.5*0.2 + (1 - sqrt(0.5))^2 * 0.4 < 0.2.
  const auto s = class_residual(kSquare, ClassSpec::s_convex_first(0.5), 0.2, 0.4, 0.5,
                                EvalDomain::closed(0, 1));
  EXPECT_NEAR(s.combination_point, 0.1 + std::pow(1 - std::sqrt(0.5), 2) * 0.4, 1e-15);
  EXPECT_LT(s.combination_point, 0.2);
  EXPECT_FALSE(s.in_domain);
}

TEST(FirstSense, BothFormsAgree) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Expr f = Expr::parse("exp(t) + t^2");
  for (double s : {0.25, 0.5, 0.9, 1.0}) {
    for (int k = 0; k < 500; ++k) {
      const double x = u(rng), y = u(rng), t = u(rng);
      const auto a = class_residual(f, ClassSpec::s_convex_first(s), x, y, t);
      const auto b = class_residual(f, ClassSpec::s_convex_first_pinheiro(s), x, y, t);
      EXPECT_EQ(a.combination_point, b.combination_point);
      EXPECT_LE(rel_diff(a.residual, b.residual), 1e-12);
    }
  }
}

TEST(Midconvex, Examples) {
  EXPECT_DOUBLE_EQ(midconvex_residual(kSquare, ModulatingFn::identity(), 0, 1).residual, 0.25);
  EXPECT_NEAR(midconvex_residual(kSquare, ModulatingFn::power(0.5), 0, 1).residual, 0.45711, 1e-5);
  const Expr line = Expr::parse("t");
  for (double a : {0.0, 0.3, 2.0}) {
    for (double b : {0.1, 0.5, 7.0}) {
      const auto r = midconvex_residual(line, ModulatingFn::identity(), a, b);
      EXPECT_EQ(r.t, 0.5);
      EXPECT_NEAR(r.residual, 0.0, 1e-15);
    }
  }
}

TEST(LocalMidconvex, Examples) {
  const auto id = ModulatingFn::identity();
  EXPECT_NEAR(local_midconvex_residual(kSquare, id, 0.5, 0.1), 0.01, 1e-15);
  EXPECT_NEAR(local_midconvex_residual(Expr::parse("t"), id, 0.3, 0.2), 0.0, 1e-15);
  EXPECT_NEAR(local_midconvex_residual(Expr::parse("1-t^2"), id, 0.5, 0.1), -0.01, 1e-15);
  EXPECT_THROW(local_midconvex_residual(kSquare, id, 0.5, 0.0), PreconditionError);
}

TEST(HChord, Examples) {
  EXPECT_EQ(h_chord(kSquare, ModulatingFn::identity(), 0, 1, 0.5), 0.5);
  EXPECT_EQ(h_chord(kSquare, ModulatingFn::power(0.5), 0, 1, 0.25), 0.5);
}

TEST(HChord, EndpointAgreement) {
  for (const char* text : {"t^2", "exp(t)"}) {
    const Expr f = Expr::parse(text);
    for (const auto& h : {ModulatingFn::identity(), ModulatingFn::power(0.5), ModulatingFn::power(1.5)}) {
      for (auto [x, y] : {std::pair{0.0, 1.0}, std::pair{0.3, 0.7}, std::pair{1.0, 4.0}}) {
        EXPECT_LE(std::abs(h_chord(f, h, x, y, x) - f(x)), 1e-9);
        EXPECT_LE(std::abs(h_chord(f, h, x, y, y) - f(y)), 1e-9);
      }
    }
  }
}

TEST(HChord, IdentityIsStraightChord) {
  const Expr f = Expr::parse("exp(t) - t");
  for (double x : {0.0, 0.4}) {
    const double y = 1.7;
    for (double t = x; t <= y; t += 0.05) {
      const double straight = (f(y) - f(x)) / (y - x) * (t - x) + f(x);
      EXPECT_LE(rel_diff(h_chord(f, ModulatingFn::identity(), x, y, t), straight), 1e-12);
    }
  }
}

TEST(HChord, GuardRails) {
  EXPECT_THROW(h_chord(kSquare, ModulatingFn::power(0.0), 0, 1, 0.5), CautionError);
  EXPECT_THROW(h_chord(kSquare, ModulatingFn::power(-1.0), 0, 1, 0.5), CautionError);
  EXPECT_THROW(h_chord(kSquare, ModulatingFn::power(-2.5), 0, 1, 0.5), CautionError);
  EXPECT_NO_THROW(h_chord(kSquare, ModulatingFn::power(-0.5), 0, 1, 0.5));
  EXPECT_THROW(h_chord(kSquare, ModulatingFn::reciprocal(), 0, 1, 0.0), DomainError);
  EXPECT_THROW(h_chord(kSquare, ModulatingFn::identity(), 1, 0, 0.5), PreconditionError);
  EXPECT_THROW(h_chord(kSquare, ModulatingFn::identity(), 0, 1, 1.5), PreconditionError);

  // Raw residuals still run for Caution cases, with the flag raised.
  const auto r = class_residual(kSquare, ClassSpec::h_convex(ModulatingFn::power(0.0)), 0, 1, 0.5);
  EXPECT_TRUE(r.caution);
  EXPECT_THROW(class_residual(kSquare, ClassSpec::h_chord(ModulatingFn::power(0.0)), 0, 1, 0.5),
               CautionError);
}

TEST(BentChord, ConvexParabola) {
  const auto r = bent_chord_test(kSquare, ModulatingFn::identity(), EvalDomain::closed(0.25, 0.75),
                                 {0.0, 1.0}, 101);
  EXPECT_NEAR(r.sup_inner, 0.25, 1e-15);
  EXPECT_NEAR(r.argsup_inner, 0.5, 1e-15);
  EXPECT_NEAR(r.sup_boundary, 0.1875, 1e-15);
  EXPECT_TRUE(r.pass);

  const auto full = bent_chord_test(kSquare, ModulatingFn::identity(), EvalDomain::closed(0, 1),
                                    {0.0, 1.0}, 101);
  EXPECT_EQ(full.sup_boundary, 0.0);
  EXPECT_NEAR(full.sup_inner, 0.25, 1e-15);
  EXPECT_TRUE(full.pass);
}

TEST(BentChord, ConcaveFails) {
  const Expr f = Expr::parse("-(t-0.5)^2 + 1");
  const EvalDomain J = EvalDomain::closed(0.25, 0.75);
  const std::size_t n = 101;

  // Oracle: L is the constant 0.75 chord, so L - f = (t - 0.5)^2 - 0.25 on J.
  const auto gap = [](double t) { return (t - 0.5) * (t - 0.5) - 0.25; };
  double oracle_inner = -1e300;
  for (std::size_t i = 1; i <= n; ++i) {
    oracle_inner = std::max(oracle_inner, gap(0.25 + 0.5 * static_cast<double>(i) / (n + 1)));
  }
  const double oracle_boundary = std::max(gap(0.25), gap(0.75));
  ASSERT_LT(oracle_inner, oracle_boundary - 1e-6);

  const auto r = bent_chord_test(f, ModulatingFn::identity(), J, {0.0, 1.0}, n);
  EXPECT_NEAR(r.sup_inner, oracle_inner, 1e-12);
  EXPECT_NEAR(r.sup_boundary, oracle_boundary, 1e-12);
  EXPECT_FALSE(r.pass);
}

TEST(BentChord, Preconditions) {
  EXPECT_THROW(bent_chord_test(kSquare, ModulatingFn::identity(), EvalDomain::closed(0, 1), {0.2, 1.0}, 11),
               PreconditionError);
  EXPECT_THROW(bent_chord_test(kSquare, ModulatingFn::identity(), EvalDomain::closed(0, 1), {0.0, 1.0}, 2),
               PreconditionError);
  EXPECT_THROW(bent_chord_test(kSquare, ModulatingFn::power(0.0), EvalDomain::closed(0, 1), {0.0, 1.0}, 11),
               CautionError);
}

TEST(MinDomainDistance, Examples) {
  EXPECT_NEAR(min_domain_distance(Sense::Second, 0.5), 0.2071, 1e-4);
  EXPECT_EQ(min_domain_distance(Sense::First, 0.5), 0.25);
  EXPECT_EQ(min_domain_distance(Sense::Second, 1.0), 0.0);
  EXPECT_NEAR(min_domain_distance(Sense::Second, 1.0 - 1e-12), 0.0, 1e-11);
  EXPECT_NEAR(min_domain_distance(Sense::First, 0.9), 0.5 - std::pow(2.0, -1.0 / 0.9), 1e-15);
  EXPECT_THROW(min_domain_distance(Sense::First, 0.0), PreconditionError);
}

TEST(HProperties, PowerHalf) {
  const auto flags = h_property_check(ModulatingFn::power(0.5), 101);

  // Oracle: brute-force the closed forms on the same open grid.
  bool ge = true, nondec = true;
  double prev = -1.0;
  for (int i = 1; i <= 101; ++i) {
    const double a = i / 102.0;
    ge = ge && std::sqrt(a) >= a;
    nondec = nondec && std::sqrt(a) >= prev;
    prev = std::sqrt(a);
  }
  ASSERT_TRUE(ge && nondec);

  EXPECT_EQ(flags.h_alpha_ge_alpha.state, FlagState::Pass);
  EXPECT_EQ(flags.nondecreasing.state, FlagState::Pass);
  EXPECT_EQ(flags.supermultiplicative.state, FlagState::Pass);
  EXPECT_EQ(flags.control_function.state, FlagState::Pass);
  EXPECT_EQ(flags.h_sum_le_one.state, FlagState::Fail);
  EXPECT_EQ(flags.supermultiplicative.samples, 33u * 33u);
  EXPECT_EQ(flags.h_alpha_ge_alpha.samples, 101u);
  ASSERT_TRUE(flags.h_zero_plus && flags.h_one);
  EXPECT_NEAR(*flags.h_zero_plus, std::sqrt(1e-9), 1e-15);
  EXPECT_EQ(*flags.h_one, 1.0);
}

TEST(HProperties, IdentityEqualityCases) {
  const auto flags = h_property_check(ModulatingFn::identity(), 101);
  EXPECT_EQ(flags.h_alpha_ge_alpha.state, FlagState::Pass);
  EXPECT_EQ(flags.h_alpha_le_alpha.state, FlagState::Pass);
  EXPECT_EQ(flags.h_sum_le_one.state, FlagState::Pass);
  EXPECT_EQ(flags.supermultiplicative.state, FlagState::Pass);
  EXPECT_EQ(flags.control_function.state, FlagState::Pass);
  EXPECT_EQ(flags.nonneg.state, FlagState::Pass);
}

TEST(HProperties, Reciprocal) {
  const auto flags = h_property_check(ModulatingFn::reciprocal(), 101);
  EXPECT_EQ(flags.nondecreasing.state, FlagState::Fail);
  EXPECT_EQ(flags.control_function.state, FlagState::Fail);
  EXPECT_EQ(flags.nondecreasing.witness.size(), 2u);
}

TEST(HProperties, UndefinedPointsAreIndeterminate) {
  const auto flags = h_property_check(ModulatingFn::expression(Expr::parse("log(t - 0.5)")), 11);
  EXPECT_EQ(flags.nonneg.state, FlagState::Indeterminate);
  EXPECT_EQ(flags.control_function.state, FlagState::Indeterminate);
  EXPECT_THROW(h_property_check(ModulatingFn::identity(), 2), PreconditionError);
}

TEST(ModulatingFnSpec, ParseNames) {
  EXPECT_EQ(ModulatingFn::parse("identity").name(), "identity");
  EXPECT_EQ(ModulatingFn::parse("power:0.5")(0.25), 0.5);
  EXPECT_EQ(ModulatingFn::parse("reciprocal")(0.5), 2.0);
  EXPECT_EQ(ModulatingFn::parse("one")(0.3), 1.0);
  EXPECT_EQ(ModulatingFn::parse("expr:2*t")(0.25), 0.5);
  EXPECT_TRUE(ModulatingFn::parse("power:0").caution_case());
  EXPECT_THROW(ModulatingFn::parse("power:"), std::invalid_argument);
  EXPECT_THROW(ModulatingFn::parse("cube"), std::invalid_argument);
  EXPECT_THROW(ModulatingFn::parse("expr:t^^2"), ParseError);
}

TEST(Property, ReductionIdentities) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::uniform_real_distribution<double> tt(0.0, 1.0);
  const Expr f = Expr::parse("exp(t) + sin(3*t)");
  const auto hid = ClassSpec::h_convex(ModulatingFn::identity());
  const auto s1 = ClassSpec::s_convex_second(1.0);
  for (int k = 0; k < 2000; ++k) {
    const double x = u(rng), y = u(rng), t = tt(rng);
    const auto base = class_residual(f, ClassSpec::convex(), x, y, t);
    EXPECT_LE(rel_diff(class_residual(f, hid, x, y, t).residual, base.residual), 1e-12);
    EXPECT_LE(rel_diff(class_residual(f, s1, x, y, t).residual, base.residual), 1e-12);
  }
}

TEST(Property, UpperBoundMonotonicity) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::uniform_real_distribution<double> tt(1e-6, 1.0 - 1e-6);
  const Expr f = Expr::parse("1 + sin(t)^2");  // f >= 0
  const auto h = ModulatingFn::power(0.5);      // h(a) >= a on (0,1)
  for (int k = 0; k < 2000; ++k) {
    const double x = u(rng), y = u(rng), t = tt(rng);
    const double convex = class_residual(f, ClassSpec::convex(), x, y, t).residual;
    EXPECT_GE(class_residual(f, ClassSpec::h_convex(h), x, y, t).residual, convex - 1e-12);
    const double pf = class_residual(f, ClassSpec::p_function(), x, y, t).residual;
    EXPECT_GE(class_residual(f, ClassSpec::godunova_levin(), x, y, t).residual, pf - 1e-12);
  }
}
