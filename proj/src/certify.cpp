#include "hconvex/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <tuple>

#include "hconvex/errors.hpp"
#include "hconvex/format.hpp"
#include "hconvex/sampling.hpp"

namespace hconvex {

void ScanConfig::validate() const {
  if (n_xy < 2) throw PreconditionError("scan grid needs n_xy >= 2");
  if (n_t < 3) throw PreconditionError("scan grid needs n_t >= 3");
  if (!(tol.abs > 0.0) || !(tol.rel > 0.0)) throw PreconditionError("tolerances must be > 0");
}

const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::CertifiedOnGrid: return "certified_on_grid";
    case VerdictStatus::Refuted: return "refuted";
    case VerdictStatus::Indeterminate: return "indeterminate";
  }
  return "?";
}

namespace {

bool lex_less(double ax, double ay, double at, double bx, double by, double bt) {
  return std::tie(ax, ay, at) < std::tie(bx, by, bt);
}

// Lower residual wins; ties go to the lexicographically smallest (x, y, t).
bool worse(const ResidualSample& a, const ResidualSample& b) {
  if (a.residual != b.residual) return a.residual < b.residual;
  return lex_less(a.x, a.y, a.t, b.x, b.y, b.t);
}

bool earlier(const EvalFailure& a, const EvalFailure& b) {
  return lex_less(a.x, a.y, a.t, b.x, b.y, b.t);
}

struct PairTask {
  double x, y, fx, fy;
};

struct Partial {
  std::optional<ResidualSample> worst;
  std::size_t evaluations = 0;
  std::size_t out_of_domain = 0;
  std::size_t skipped = 0;
  double max_abs_f = 0.0;
  double min_f = std::numeric_limits<double>::infinity();
  std::optional<EvalFailure> failure;

  void merge(const Partial& o) {
    if (o.worst && (!worst || worse(*o.worst, *worst))) worst = o.worst;
    evaluations += o.evaluations;
    out_of_domain += o.out_of_domain;
    skipped += o.skipped;
    max_abs_f = std::max(max_abs_f, o.max_abs_f);
    min_f = std::min(min_f, o.min_f);
    if (o.failure && (!failure || earlier(*o.failure, *failure))) failure = o.failure;
  }
};

Partial scan_range(const Expr& f, const ClassSpec& c, const EvalDomain& d,
                   const std::vector<PairTask>& tasks, const std::vector<double>& ts,
                   std::size_t begin, std::size_t end) {
  Partial p;
  for (std::size_t k = begin; k < end; ++k) {
    const PairTask& task = tasks[k];
    for (double t : ts) {
      if (c.is_first_sense() && !d.contains(combination_point(c, task.x, task.y, t))) {
        ++p.skipped;
        ++p.out_of_domain;
        continue;
      }
      try {
        const ResidualSample r =
            class_residual_from_values(f, c, task.x, task.y, t, task.fx, task.fy, d);
        ++p.evaluations;
        if (!r.in_domain) ++p.out_of_domain;
        p.max_abs_f = std::max(p.max_abs_f, std::abs(r.lhs));
        p.min_f = std::min(p.min_f, r.lhs);
        if (!p.worst || worse(r, *p.worst)) p.worst = r;
      } catch (const DomainError& e) {
        EvalFailure fail{task.x, task.y, t, e.t(), e.what()};
        if (!p.failure || earlier(fail, *p.failure)) p.failure = std::move(fail);
      }
    }
  }
  return p;
}

std::vector<double> t_grid(const ClassSpec& c, std::size_t n_t) {
  if (c.is_midpoint()) return {0.5};
  return grid_points(c.open_t() ? EvalDomain::open(0.0, 1.0) : EvalDomain::closed(0.0, 1.0), n_t);
}

}  // namespace

Verdict scan_class(const Expr& f, const ClassSpec& c, const EvalDomain& d, const ScanConfig& cfg) {
  cfg.validate();
  if (c.kind == ClassKind::HChord && c.caution_case()) {
    throw CautionError("h=" + c.h->name() + " is excluded from the geometric h-chord interpretation");
  }

  Verdict v;
  v.class_name = c.name();

  // Endpoint values; a failure here means f is not defined on the grid.
  std::vector<double> xs = grid_points(d, cfg.n_xy);
  if (cfg.random_pairs > 0) {
    std::mt19937_64 rng(cfg.seed);
    for (std::size_t k = 0; k < 2 * cfg.random_pairs; ++k) {
      const double u = unit_uniform(rng);
      double x = d.lo + u * (d.hi - d.lo);
      if (!d.contains(x)) x = xs.front();
      xs.push_back(x);
    }
  }
  std::vector<double> fs(xs.size());
  double node_max = 0.0;
  double node_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    try {
      fs[i] = f(xs[i]);
    } catch (const DomainError& e) {
      v.status = VerdictStatus::Indeterminate;
      v.failure = EvalFailure{xs[i], xs[i], 0.0, xs[i], e.what()};
      return v;
    }
    node_max = std::max(node_max, std::abs(fs[i]));
    node_min = std::min(node_min, fs[i]);
  }

  std::vector<PairTask> tasks;
  const std::size_t n = cfg.n_xy;
  tasks.reserve(n * (n - 1) / 2 + cfg.random_pairs);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) tasks.push_back({xs[i], xs[j], fs[i], fs[j]});
  }
  for (std::size_t k = 0; k < cfg.random_pairs; ++k) {
    std::size_t a = n + 2 * k, b = a + 1;
    if (xs[a] == xs[b]) continue;
    if (xs[a] > xs[b]) std::swap(a, b);
    tasks.push_back({xs[a], xs[b], fs[a], fs[b]});
  }

  const std::vector<double> ts = t_grid(c, cfg.n_t);
  const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(tasks.size())));
  Partial total;
  if (threads == 1) {
    total = scan_range(f, c, d, tasks, ts, 0, tasks.size());
  } else {
    std::vector<Partial> parts(threads);
    std::vector<std::thread> pool;
    const std::size_t chunk = (tasks.size() + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::size_t begin = std::min(tasks.size(), w * chunk);
      const std::size_t end = std::min(tasks.size(), begin + chunk);
      pool.emplace_back([&, w, begin, end] { parts[w] = scan_range(f, c, d, tasks, ts, begin, end); });
    }
    for (auto& th : pool) th.join();
    for (const auto& part : parts) total.merge(part);
  }

  v.evaluations = total.evaluations;
  v.out_of_domain_count = total.out_of_domain;
  v.skipped_count = total.skipped;
  v.max_abs_f = std::max(node_max, total.max_abs_f);
  v.min_f = std::min(node_min, total.min_f);
  v.tau = cfg.tol.tau(v.max_abs_f);
  v.witness = total.worst;
  v.worst_residual = total.worst ? total.worst->residual : 0.0;
  v.failure = total.failure;

  if (v.failure) {
    v.status = VerdictStatus::Indeterminate;
  } else if (v.witness && v.worst_residual < -v.tau) {
    v.status = VerdictStatus::Refuted;
  } else {
    v.status = VerdictStatus::CertifiedOnGrid;
  }
  if (c.needs_nonnegative_f() && v.min_f < 0.0) {
    v.warnings.push_back("f takes negative values on the scan (min f = " + format_double(v.min_f) +
                         "); the class assumes f >= 0");
  }
  if (c.needs_nonnegative_f() && !d.inside_positive_axis()) {
    v.warnings.push_back("domain " + d.to_string() + " is not inside (0,inf)");
  }
  if (c.caution_case()) {
    v.warnings.push_back("h=" + c.h->name() +
                         " is a Caution case (t^k with k <= -1 or k = 0); residuals have no "
                         "geometric meaning");
  }
  if (v.skipped_count > 0) {
    v.warnings.push_back(std::to_string(v.skipped_count) +
                         " combination points fell outside the domain and were skipped");
  }
  return v;
}

RefineResult refine_witness(const Expr& f, const ClassSpec& c, const ResidualSample& w,
                            std::size_t rounds, const EvalDomain& d) {
  if (!(w.residual < 0.0)) {
    throw PreconditionError("refine_witness needs a violating sample (residual < 0), got " +
                            format_double(w.residual));
  }
  RefineResult out;
  out.sample = w;
  const double width = d.hi - d.lo;
  const double x_lo = d.open_lo ? d.lo + 1e-9 * width : d.lo;
  const double x_hi = d.open_hi ? d.hi - 1e-9 * width : d.hi;
  const double t_lo = c.open_t() ? 1e-9 : 0.0;
  const double t_hi = c.open_t() ? 1.0 - 1e-9 : 1.0;

  ResidualSample best = w;
  double steps[3] = {0.25 * width, 0.25 * width, 0.25};
  const int coords = c.is_midpoint() ? 2 : 3;

  try {
    for (std::size_t round = 0; round < rounds; ++round) {
      for (int k = 0; k < coords; ++k) {
        for (double dir : {-1.0, 1.0}) {
          // Keep stepping while it helps, at most a few times per direction.
          for (int moves = 0; moves < 8; ++moves) {
            double cand[3] = {best.x, best.y, best.t};
            cand[k] += dir * steps[k];
            cand[k] = k < 2 ? std::clamp(cand[k], x_lo, x_hi) : std::clamp(cand[k], t_lo, t_hi);
            if (cand[k] == (k == 0 ? best.x : k == 1 ? best.y : best.t)) break;
            if (c.is_first_sense() && !d.contains(combination_point(c, cand[0], cand[1], cand[2]))) break;
            const ResidualSample r = class_residual(f, c, cand[0], cand[1], cand[2], d);
            if (!(r.residual < best.residual)) break;
            best = r;
            ++out.accepted_moves;
          }
        }
      }
      for (double& s : steps) s *= 0.5;
    }
  } catch (const DomainError& e) {
    out.evaluation_error = true;
    out.note = e.what();
    return out;
  }
  out.sample = best;
  return out;
}

MidconvexityResult midconvexity_probe(const Expr& f, const ModulatingFn& h, const EvalDomain& d,
                              const ScanConfig& cfg, bool concave) {
  MidconvexityResult r;
  r.concave = concave;
  r.mid_verdict = scan_class(f, concave ? ClassSpec::h_midconcave(h) : ClassSpec::h_midconvex(h), d, cfg);
  r.full_verdict = scan_class(f, concave ? ClassSpec::h_concave(h) : ClassSpec::h_convex(h), d, cfg);
  r.agree = r.mid_verdict.status == r.full_verdict.status;
  const auto flags = h_property_check(h, 101);
  r.h_vs_alpha = concave ? flags.h_alpha_le_alpha : flags.h_alpha_ge_alpha;
  r.f_continuous_on_grid = check_domain(f, d, cfg.n_xy).empty();
  r.f_nonnegative = !r.mid_verdict.failure && !r.full_verdict.failure &&
                    std::min(r.mid_verdict.min_f, r.full_verdict.min_f) >= 0.0;
  return r;
}

SecondDerivativeResult second_derivative_inf(const Expr& f, const EvalDomain& d, std::size_t n,
                                             double fd_step) {
  if (n < 3) throw PreconditionError("second_derivative_inf needs n >= 3");
  if (!(fd_step > 0.0)) throw PreconditionError("fd_step must be > 0");
  SecondDerivativeResult r;
  r.inf_value = std::numeric_limits<double>::infinity();
  r.min_delta = std::numeric_limits<double>::infinity();
  for (double x : grid_points(EvalDomain::open(d.lo, d.hi), n)) {
    const double delta = fd_step * (1.0 + std::abs(x));
    try {
      const double fp = f(x + delta);
      const double f0 = f(x);
      const double fm = f(x - delta);
      r.max_abs_f = std::max({r.max_abs_f, std::abs(fp), std::abs(f0), std::abs(fm)});
      const double second = (fp - 2.0 * f0 + fm) / (delta * delta);
      r.min_delta = std::min(r.min_delta, delta);
      if (second < r.inf_value) {
        r.inf_value = second;
        r.argmin = x;
      }
    } catch (const DomainError& e) {
      r.failure = EvalFailure{x, x, 0.0, e.t(), e.what()};
      return r;
    }
  }
  return r;
}

ConjectureResult conjecture_probe(const Expr& f, const ModulatingFn& h, const EvalDomain& d,
                                  const ScanConfig& cfg, double fd_step) {
  cfg.validate();
  ConjectureResult r;
  r.h_half = h(0.5);
  r.threshold = 1.0 - 2.0 * r.h_half;
  r.second_derivative = second_derivative_inf(f, d, cfg.n_xy, fd_step);
  const auto& sd = r.second_derivative;
  // Second differences carry rounding noise of order eps * |f| / delta^2.
  const double eps = std::numeric_limits<double>::epsilon();
  r.tau = cfg.tol.tau(sd.max_abs_f);
  if (std::isfinite(sd.min_delta)) r.tau += 16.0 * eps * (1.0 + sd.max_abs_f) / (sd.min_delta * sd.min_delta);
  r.derivative_side = !sd.failure && sd.inf_value >= r.threshold - r.tau;
  r.hconvex_side = scan_class(f, ClassSpec::h_convex(h), d, cfg);
  r.consistent = !sd.failure && r.hconvex_side.status != VerdictStatus::Indeterminate &&
                 r.derivative_side == (r.hconvex_side.status == VerdictStatus::CertifiedOnGrid);
  return r;
}

}  // namespace hconvex
