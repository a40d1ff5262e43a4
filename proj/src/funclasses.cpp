#include "hconvex/funclasses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hconvex/errors.hpp"
#include "hconvex/format.hpp"

namespace hconvex {

namespace {

void require_s(double s) {
  if (!(s > 0.0 && s <= 1.0)) {
    throw PreconditionError("s must lie in (0, 1], got " + format_double(s));
  }
}

const ModulatingFn& require_h(const ClassSpec& c) {
  if (!c.h) throw PreconditionError("class " + c.name() + " needs a modulating function h");
  return *c.h;
}

void reject_caution(const ModulatingFn& h) {
  if (h.caution_case()) {
    throw CautionError("h=" + h.name() +
                       " is excluded from the geometric h-chord interpretation "
                       "(t^k is only admissible for k in (-1,0) or (0,inf))");
  }
}

double first_sense_beta(double t, double s) { return std::pow(1.0 - std::pow(t, s), 1.0 / s); }

bool within_pair(double p, double x, double y) {
  const double lo = std::min(x, y);
  const double hi = std::max(x, y);
  const double slack = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
  return p >= lo - slack && p <= hi + slack;
}

}  // namespace

ClassSpec ClassSpec::s_convex_first(double s) {
  require_s(s);
  return {ClassKind::SConvexFirst, s, std::nullopt};
}

ClassSpec ClassSpec::s_convex_first_pinheiro(double s) {
  require_s(s);
  return {ClassKind::SConvexFirstPinheiro, s, std::nullopt};
}

ClassSpec ClassSpec::s_convex_second(double s) {
  require_s(s);
  return {ClassKind::SConvexSecond, s, std::nullopt};
}

std::string ClassSpec::name() const {
  const auto with_h = [&](const char* base) {
    return std::string(base) + "(" + (h ? h->name() : std::string("?")) + ")";
  };
  switch (kind) {
    case ClassKind::Convex: return "convex";
    case ClassKind::SConvexFirst: return "sconvex1:" + format_double(s);
    case ClassKind::SConvexFirstPinheiro: return "sconvex1-pinheiro:" + format_double(s);
    case ClassKind::SConvexSecond: return "sconvex2:" + format_double(s);
    case ClassKind::GodunovaLevin: return "godunova-levin";
    case ClassKind::PFunction: return "pfunction";
    case ClassKind::HConvex: return with_h("hconvex");
    case ClassKind::HConcave: return with_h("hconcave");
    case ClassKind::HMidconvex: return with_h("hmidconvex");
    case ClassKind::HMidconcave: return with_h("hmidconcave");
    case ClassKind::HChord: return with_h("hconvex-geometric");
  }
  return "?";
}

bool ClassSpec::needs_nonnegative_f() const {
  switch (kind) {
    case ClassKind::HConvex:
    case ClassKind::HConcave:
    case ClassKind::HMidconvex:
    case ClassKind::HMidconcave:
    case ClassKind::HChord:
      return true;
    default:
      return false;
  }
}

double combination_point(const ClassSpec& c, double x, double y, double t) {
  switch (c.kind) {
    case ClassKind::SConvexFirst:
    case ClassKind::SConvexFirstPinheiro:
      return t * x + first_sense_beta(t, c.s) * y;
    case ClassKind::HMidconvex:
    case ClassKind::HMidconcave:
      return (x + y) / 2.0;
    default:
      return t * x + (1.0 - t) * y;
  }
}

ResidualSample class_residual_from_values(const Expr& f, const ClassSpec& c, double x, double y,
                                          double t, double fx, double fy,
                                          const std::optional<EvalDomain>& domain) {
  if (c.kind == ClassKind::GodunovaLevin && !(t > 0.0 && t < 1.0)) {
    throw PreconditionError("Godunova-Levin residual needs t in (0,1), got t=" + format_double(t));
  }
  if (!c.is_midpoint() && !(t >= 0.0 && t <= 1.0)) {
    throw PreconditionError("combination parameter t must lie in [0,1], got " + format_double(t));
  }
  if (c.kind == ClassKind::HChord) reject_caution(require_h(c));

  ResidualSample r;
  r.x = x;
  r.y = y;
  r.t = c.is_midpoint() ? 0.5 : t;
  r.combination_point = combination_point(c, x, y, t);
  r.caution = c.caution_case();
  if (c.is_first_sense()) {
    r.in_domain = within_pair(r.combination_point, x, y) &&
                  (!domain || domain->contains(r.combination_point));
  }
  r.lhs = f(r.combination_point);

  bool reversed = false;
  switch (c.kind) {
    case ClassKind::Convex:
      r.rhs = t * fx + (1.0 - t) * fy;
      break;
    case ClassKind::SConvexFirst: {
      const double beta = first_sense_beta(t, c.s);
      r.rhs = std::pow(t, c.s) * fx + std::pow(beta, c.s) * fy;
      break;
    }
    case ClassKind::SConvexFirstPinheiro: {
      const double ts = std::pow(t, c.s);
      r.rhs = ts * fx + (1.0 - ts) * fy;
      break;
    }
    case ClassKind::SConvexSecond:
      r.rhs = std::pow(t, c.s) * fx + std::pow(1.0 - t, c.s) * fy;
      break;
    case ClassKind::GodunovaLevin:
      r.rhs = fx / t + fy / (1.0 - t);
      break;
    case ClassKind::PFunction:
      r.rhs = fx + fy;
      break;
    case ClassKind::HConcave:
      reversed = true;
      [[fallthrough]];
    case ClassKind::HConvex: {
      const auto& h = require_h(c);
      r.rhs = h(t) * fx + h(1.0 - t) * fy;
      break;
    }
    case ClassKind::HMidconcave:
      reversed = true;
      [[fallthrough]];
    case ClassKind::HMidconvex:
      r.rhs = require_h(c)(0.5) * (fx + fy);
      break;
    case ClassKind::HChord:
      r.rhs = (fy - fx) * require_h(c)(1.0 - t) + fx;
      break;
  }
  r.residual = reversed ? r.lhs - r.rhs : r.rhs - r.lhs;
  return r;
}

ResidualSample class_residual(const Expr& f, const ClassSpec& c, double x, double y, double t,
                              const std::optional<EvalDomain>& domain) {
  return class_residual_from_values(f, c, x, y, t, f(x), f(y), domain);
}

RawFirstSenseSample first_sense_raw(const Expr& f, double s, double x, double y, double alpha,
                                    double beta, const std::optional<EvalDomain>& domain) {
  require_s(s);
  if (alpha < 0.0 || beta < 0.0) throw PreconditionError("first-sense weights must be >= 0");
  RawFirstSenseSample out;
  ResidualSample& r = out.sample;
  r.x = x;
  r.y = y;
  r.t = alpha;
  r.combination_point = alpha * x + beta * y;
  r.in_domain = within_pair(r.combination_point, x, y) &&
                (!domain || domain->contains(r.combination_point));
  r.lhs = f(r.combination_point);
  r.rhs = std::pow(alpha, s) * f(x) + std::pow(beta, s) * f(y);
  r.residual = r.rhs - r.lhs;
  out.constraint_gap = std::pow(alpha, s) + std::pow(beta, s) - 1.0;
  return out;
}

ResidualSample midconvex_residual(const Expr& f, const ModulatingFn& h, double x, double y) {
  return class_residual(f, ClassSpec::h_midconvex(h), x, y, 0.5);
}

double local_midconvex_residual(const Expr& f, const ModulatingFn& h, double x, double p) {
  if (!(p > 0.0)) throw PreconditionError("local midconvexity needs p > 0");
  return h(0.5) * (f(x + p) + f(x - p)) - f(x);
}

double h_chord(const Expr& f, const ModulatingFn& h, double x, double y, double t) {
  reject_caution(h);
  if (!(x < y)) throw PreconditionError("h-chord needs x < y");
  if (!(t >= x && t <= y)) throw PreconditionError("h-chord needs t in [x, y]");
  const double u = (t - x) / (y - x);
  double hu = 0.0;
  try {
    hu = h(u);
  } catch (const DomainError& e) {
    throw DomainError(e.subexpr(), u,
                      std::string(e.what()) +
                          "; h is not defined at this chord endpoint, sample t in the "
                          "half-open interval instead");
  }
  const double fx = f(x);
  return (f(y) - fx) * hu + fx;
}

BentChordResult bent_chord_test(const Expr& f, const ModulatingFn& h, const EvalDomain& J,
                                std::pair<double, double> outer, std::size_t n,
                                const Tolerance& tol) {
  const auto [x, y] = outer;
  if (n < 3) throw PreconditionError("bent-chord test needs n >= 3");
  if (!(J.lo >= x && J.hi <= y)) throw PreconditionError("bent-chord test needs J inside [x, y]");

  double scale = 0.0;
  const auto gap = [&](double t) {
    const double ft = f(t);
    scale = std::max(scale, std::abs(ft));
    return h_chord(f, h, x, y, t) - ft;
  };

  BentChordResult r;
  r.sup_boundary = std::max(gap(J.lo), gap(J.hi));
  r.sup_inner = -std::numeric_limits<double>::infinity();
  for (double t : grid_points(EvalDomain::open(J.lo, J.hi), n)) {
    const double g = gap(t);
    if (g > r.sup_inner) {
      r.sup_inner = g;
      r.argsup_inner = t;
    }
  }
  r.tau = tol.tau(scale);
  r.pass = r.sup_inner >= r.sup_boundary - r.tau;
  return r;
}

double min_domain_distance(Sense sense, double s) {
  require_s(s);
  return sense == Sense::First ? 0.5 - std::pow(2.0, -1.0 / s) : std::pow(2.0, -s) - 0.5;
}

const char* to_string(FlagState s) {
  switch (s) {
    case FlagState::Pass: return "pass";
    case FlagState::Fail: return "fail";
    case FlagState::Indeterminate: return "indeterminate";
  }
  return "?";
}

namespace {

// Accumulates the worst slack of a sampled property; slack >= -tol passes.
class FlagBuilder {
public:
  explicit FlagBuilder(std::string grid) { flag_.grid = std::move(grid); }

  void observe(double slack, double scale, std::vector<double> where) {
    ++flag_.samples;
    if (flag_.samples == 1 || slack < flag_.worst_margin) {
      flag_.worst_margin = slack;
      flag_.witness = std::move(where);
    }
    if (slack < -1e-12 * (1.0 + std::abs(scale))) failed_ = true;
  }

  void error(const std::string& what, std::vector<double> where) {
    if (!errored_) {
      flag_.note = what;
      flag_.witness = std::move(where);
    }
    errored_ = true;
  }

  SampledFlag finish() {
    if (errored_) {
      flag_.state = FlagState::Indeterminate;
    } else {
      flag_.state = failed_ ? FlagState::Fail : FlagState::Pass;
    }
    return flag_;
  }

private:
  SampledFlag flag_;
  bool failed_ = false;
  bool errored_ = false;
};

}  // namespace

HPropertyFlags h_property_check(const ModulatingFn& h, std::size_t grid, std::size_t pair_grid) {
  if (grid < 3) throw PreconditionError("h_property_check needs grid >= 3");
  if (pair_grid < 2) throw PreconditionError("h_property_check needs pair_grid >= 2");

  HPropertyFlags out;
  const auto alphas = grid_points(EvalDomain::open(0.0, 1.0), grid);
  const std::string grid_desc = std::to_string(grid) + "-point open grid on (0,1)";

  const auto try_eval = [&](double t) -> std::optional<double> {
    try {
      return h(t);
    } catch (const DomainError&) {
      return std::nullopt;
    }
  };
  out.h_zero_plus = try_eval(kEndpointInset);
  out.h_one = try_eval(1.0);

  FlagBuilder nonneg(grid_desc);
  FlagBuilder nondecreasing(grid_desc);
  FlagBuilder ge_alpha(grid_desc);
  FlagBuilder le_alpha(grid_desc);
  FlagBuilder sum_le_one(grid_desc);

  std::vector<std::optional<double>> values;
  values.reserve(alphas.size());
  for (double a : alphas) {
    const auto v = try_eval(a);
    values.push_back(v);
    if (!v) {
      const std::string what = "h undefined at " + format_double(a);
      for (auto* b : {&nonneg, &nondecreasing, &ge_alpha, &le_alpha, &sum_le_one}) b->error(what, {a});
      continue;
    }
    nonneg.observe(*v, *v, {a});
    ge_alpha.observe(*v - a, *v, {a});
    le_alpha.observe(a - *v, *v, {a});
    const auto mirror = try_eval(1.0 - a);
    if (!mirror) {
      sum_le_one.error("h undefined at " + format_double(1.0 - a), {1.0 - a});
    } else {
      sum_le_one.observe(1.0 - (*v + *mirror), *v + *mirror, {a});
    }
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i - 1] && values[i]) {
      nondecreasing.observe(*values[i] - *values[i - 1], *values[i], {alphas[i - 1], alphas[i]});
    }
  }

  FlagBuilder supermult(std::to_string(pair_grid) + "x" + std::to_string(pair_grid) +
                        " pair grid on (0,1)^2");
  const auto pair_pts = grid_points(EvalDomain::open(0.0, 1.0), pair_grid);
  for (double a : pair_pts) {
    for (double b : pair_pts) {
      const auto ha = try_eval(a);
      const auto hb = try_eval(b);
      const auto hab = try_eval(a * b);
      if (!ha || !hb || !hab) {
        supermult.error("h undefined on pair grid", {a, b});
        continue;
      }
      supermult.observe(*hab - *ha * *hb, *hab, {a, b});
    }
  }

  out.nonneg = nonneg.finish();
  out.nondecreasing = nondecreasing.finish();
  out.h_alpha_ge_alpha = ge_alpha.finish();
  out.h_alpha_le_alpha = le_alpha.finish();
  out.h_sum_le_one = sum_le_one.finish();
  out.supermultiplicative = supermult.finish();
  out.supermultiplicative.note = "sampled on a pair grid; not a proof of supermultiplicativity";

  // Control function: nondecreasing and inf h -> 0 (judged at the 1e-9 inset).
  SampledFlag& ctrl = out.control_function;
  ctrl.grid = grid_desc + " plus t=1e-9";
  ctrl.samples = out.nondecreasing.samples + 1;
  double inf_h = std::numeric_limits<double>::infinity();
  double inf_at = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] && *values[i] < inf_h) {
      inf_h = *values[i];
      inf_at = alphas[i];
    }
  }
  if (out.h_zero_plus && *out.h_zero_plus <= inf_h) {
    inf_h = *out.h_zero_plus;
    inf_at = kEndpointInset;
  }
  ctrl.worst_margin = 1e-3 - inf_h;
  ctrl.witness = {inf_at};
  if (out.nondecreasing.state == FlagState::Indeterminate || !out.h_zero_plus) {
    ctrl.state = FlagState::Indeterminate;
    ctrl.note = "h not evaluable on the whole grid";
  } else {
    const bool to_zero = inf_h <= 1e-3;
    ctrl.state = (out.nondecreasing.state == FlagState::Pass && to_zero) ? FlagState::Pass
                                                                        : FlagState::Fail;
    if (!to_zero) ctrl.note = "inf of sampled h is " + format_double(inf_h);
    if (out.nondecreasing.state == FlagState::Fail) ctrl.note = "h is not nondecreasing";
  }
  return out;
}

}  // namespace hconvex
