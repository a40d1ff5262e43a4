#include "hconvex/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "hconvex/certify.hpp"
#include "hconvex/continuity.hpp"
#include "hconvex/errors.hpp"
#include "hconvex/format.hpp"
#include "hconvex/limitcurve.hpp"
#include "hconvex/report.hpp"

namespace hconvex {

using nlohmann::json;

namespace {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct CommandInfo {
  const char* name;
  const char* help;
  std::vector<std::string> flags;
};

const std::vector<std::string> kScanFlags = {"f", "h", "domain", "grid", "tol", "tol-abs", "seed", "pairs", "threads"};

std::vector<std::string> with(std::vector<std::string> base, std::initializer_list<const char*> more) {
  base.insert(base.end(), more.begin(), more.end());
  return base;
}

const std::vector<CommandInfo>& commands() {
  static const std::vector<CommandInfo> list = {
      {"check", "scan a class inequality on a grid", with(kScanFlags, {"class", "refine", "rounds"})},
      {"refute", "scan and refine the worst violation", with(kScanFlags, {"class", "rounds"})},
      {"theorem1", "compare h-midconvex and h-convex verdicts", with(kScanFlags, {"concave"})},
      {"theorem2", "h-continuity probe on an inner interval", with(kScanFlags, {"inner", "eps"})},
      {"modulus", "sup of |f(y)-f(x)|/h(|y-x|) and control-function check",
       {"f", "h", "domain", "pairs", "seed", "tol", "tol-abs"}},
      {"holder", "fit H and alpha of a Hoelder modulus", {"f", "domain", "pairs", "seed"}},
      {"curve", "height, length and slope of the limiting s-curve", {"s", "X", "Y", "n", "tol"}},
      {"conjecture", "second-derivative threshold against an h-convexity scan", kScanFlags},
      {"props", "sampled properties of h", {"h", "n"}},
      {"figure1", "CSV of t^(1/2), t, t^(3/2) and t^2", {"n"}},
  };
  return list;
}

const std::set<std::string> kBoolFlags = {"refine", "concave", "timing"};
const std::vector<std::string> kOutputFlags = {"out", "format", "config", "timing"};

// Merged settings: config file first, then flags given on the command line.
class Settings {
public:
  explicit Settings(std::map<std::string, json> values) : values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return it->second.is_string() ? it->second.get<std::string>() : it->second.dump();
  }

  std::string required(const std::string& key) const {
    if (!has(key)) throw ConfigError("missing --" + key);
    return str(key, "");
  }

  double real(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second.is_number()) return it->second.get<double>();
    return parse_real(str(key, ""), "--" + key);
  }

  std::size_t count(const std::string& key, std::size_t fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second.is_number_unsigned()) return it->second.get<std::size_t>();
    return parse_count(str(key, ""), "--" + key);
  }

  bool flag(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return false;
    if (it->second.is_boolean()) return it->second.get<bool>();
    const std::string s = str(key, "");
    if (s == "true") return true;
    if (s == "false") return false;
    throw ConfigError("--" + key + " expects true or false, got '" + s + "'");
  }

  static double parse_real(const std::string& s, const std::string& what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw ConfigError(what + " expects a finite number, got '" + s + "'");
    }
    return v;
  }

  static std::size_t parse_count(const std::string& s, const std::string& what) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      throw ConfigError(what + " expects a nonnegative integer, got '" + s + "'");
    }
    return v;
  }

private:
  std::map<std::string, json> values_;
};

Expr parse_f(const Settings& s) { return Expr::parse(s.required("f")); }

ModulatingFn parse_h(const Settings& s) { return ModulatingFn::parse(s.str("h", "identity")); }

EvalDomain parse_domain(const Settings& s) { return EvalDomain::parse(s.str("domain", "0:1")); }

std::pair<std::size_t, std::size_t> parse_grid(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) {
    const std::size_t n = Settings::parse_count(text, "--grid");
    return {n, n};
  }
  return {Settings::parse_count(text.substr(0, x), "--grid"), Settings::parse_count(text.substr(x + 1), "--grid")};
}

ScanConfig scan_config(const Settings& s) {
  ScanConfig cfg;
  const auto [n_xy, n_t] = parse_grid(s.str("grid", "51x51"));
  cfg.n_xy = n_xy;
  cfg.n_t = n_t;
  cfg.tol.rel = s.real("tol", cfg.tol.rel);
  cfg.tol.abs = s.real("tol-abs", cfg.tol.abs);
  cfg.seed = s.count("seed", 0);
  cfg.random_pairs = s.count("pairs", 0);
  cfg.threads = static_cast<unsigned>(std::max<std::size_t>(1, s.count("threads", 1)));
  cfg.refine = s.flag("refine");
  cfg.refine_rounds = s.count("rounds", cfg.refine_rounds);
  cfg.validate();
  return cfg;
}

// Echo of the scan settings under the same keys a config file uses.
void echo_scan(json& j, const ScanConfig& cfg) {
  j["grid"] = std::to_string(cfg.n_xy) + "x" + std::to_string(cfg.n_t);
  j["tol"] = cfg.tol.rel;
  j["tol-abs"] = cfg.tol.abs;
  j["seed"] = cfg.seed;
  j["pairs"] = cfg.random_pairs;
  j["threads"] = cfg.threads;
}

std::string fmt(double v) { return format_double(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }
std::string fmt(std::size_t v) { return std::to_string(v); }

void add_warnings(Report& r, const std::vector<std::string>& ws, const std::string& prefix = "") {
  for (const auto& w : ws) r.hypothesis_warnings.push_back(prefix + w);
}

json evaluation_error(const std::string& message) { return {{"kind", "evaluation"}, {"message", message}}; }

const std::string kVerdictCsvHeader =
    "class,status,worst_residual,x,y,t,lhs,rhs,combination_point,in_domain,evaluations,out_of_domain_count,tau,"
    "refined_x,refined_y,refined_t,refined_residual\n";

std::vector<std::string> verdict_cells(const Verdict& v) {
  std::vector<std::string> row = {v.class_name, to_string(v.status), fmt(v.worst_residual)};
  if (v.witness) {
    const auto& w = *v.witness;
    for (double d : {w.x, w.y, w.t, w.lhs, w.rhs, w.combination_point}) row.push_back(fmt(d));
    row.push_back(fmt(w.in_domain));
  } else {
    row.insert(row.end(), 7, "");
  }
  row.push_back(fmt(v.evaluations));
  row.push_back(fmt(v.out_of_domain_count));
  row.push_back(fmt(v.tau));
  return row;
}

int cmd_check(const Settings& s, Report& r, bool force_refine) {
  const Expr f = parse_f(s);
  const ModulatingFn h = parse_h(s);
  const std::string class_text = s.str("class", "convex");
  const ClassSpec c = parse_class(class_text, h);
  const EvalDomain d = parse_domain(s);
  ScanConfig cfg = scan_config(s);
  if (force_refine) cfg.refine = true;
  if (c.kind == ClassKind::HChord && c.caution_case()) {
    throw CautionError("h=" + h.name() + " is a Caution case (t^k needs k in (-1,0) or k > 0); " +
                       "the geometric h-chord form is rejected");
  }

  r.config = {{"f", f.source()}, {"class", class_text}, {"h", s.str("h", "identity")}, {"domain", d.to_string()},
              {"rounds", cfg.refine_rounds}};
  echo_scan(r.config, cfg);
  if (!force_refine) r.config["refine"] = cfg.refine;

  const Verdict v = scan_class(f, c, d, cfg);
  r.result["verdict"] = verdict_json(v);
  add_warnings(r, v.warnings);
  std::vector<std::string> row = verdict_cells(v);
  std::vector<std::string> refined(4, "");
  if (cfg.refine && v.status == VerdictStatus::Refuted) {
    const RefineResult rr = refine_witness(f, c, *v.witness, cfg.refine_rounds, d);
    json jr = {{"sample", sample_json(rr.sample)},
               {"accepted_moves", rr.accepted_moves},
               {"evaluation_error", rr.evaluation_error}};
    if (!rr.note.empty()) jr["note"] = rr.note;
    r.result["refined"] = jr;
    refined = {fmt(rr.sample.x), fmt(rr.sample.y), fmt(rr.sample.t), fmt(rr.sample.residual)};
  } else if (cfg.refine) {
    r.result["refined"] = nullptr;
  }
  row.insert(row.end(), refined.begin(), refined.end());
  r.csv = kVerdictCsvHeader + csv_row(row);

  if (v.status == VerdictStatus::Indeterminate) {
    r.error = evaluation_error(v.failure ? v.failure->message : "indeterminate scan");
    return kExitEvaluation;
  }
  return kExitOk;
}

int cmd_midconvexity(const Settings& s, Report& r) {
  const Expr f = parse_f(s);
  const ModulatingFn h = parse_h(s);
  const EvalDomain d = parse_domain(s);
  const ScanConfig cfg = scan_config(s);
  const bool concave = s.flag("concave");
  r.config = {{"f", f.source()}, {"h", s.str("h", "identity")}, {"domain", d.to_string()}, {"concave", concave}};
  echo_scan(r.config, cfg);

  const MidconvexityResult t = midconvexity_probe(f, h, d, cfg, concave);
  r.result = {
      {"mid_verdict", verdict_json(t.mid_verdict)},
      {"full_verdict", verdict_json(t.full_verdict)},
      {"agree", t.agree},
      {"concave", t.concave},
      {"hypothesis_flags",
       {{concave ? "h_alpha_le_alpha" : "h_alpha_ge_alpha", flag_json(t.h_vs_alpha)},
        {"f_continuous_on_grid", t.f_continuous_on_grid},
        {"f_nonnegative", t.f_nonnegative}}},
  };
  add_warnings(r, t.mid_verdict.warnings, "mid: ");
  add_warnings(r, t.full_verdict.warnings, "full: ");
  if (t.h_vs_alpha.state != FlagState::Pass) {
    r.hypothesis_warnings.push_back(std::string("sampled h(a) ") + (concave ? "<=" : ">=") + " a is " +
                                    to_string(t.h_vs_alpha.state));
  }
  if (!t.f_continuous_on_grid) r.hypothesis_warnings.push_back("f is not evaluable on the whole grid");
  if (!t.f_nonnegative) r.hypothesis_warnings.push_back("f takes negative values");

  r.csv = "probe,class,status,worst_residual,x,y,t\n";
  for (const auto& [probe, v] : {std::pair{"mid", &t.mid_verdict}, std::pair{"full", &t.full_verdict}}) {
    std::vector<std::string> row = {probe, v->class_name, to_string(v->status), fmt(v->worst_residual)};
    if (v->witness) {
      for (double d2 : {v->witness->x, v->witness->y, v->witness->t}) row.push_back(fmt(d2));
    } else {
      row.insert(row.end(), 3, "");
    }
    r.csv += csv_row(row);
  }
  for (const Verdict* v : {&t.mid_verdict, &t.full_verdict}) {
    if (v->status == VerdictStatus::Indeterminate) {
      r.error = evaluation_error(v->failure ? v->failure->message : "indeterminate scan");
      return kExitEvaluation;
    }
  }
  return kExitOk;
}

json ratio_json(const ContinuityRatio& c) {
  return {{"sup_ratio", number_json(c.sup_ratio)},
          {"witness_pair", {number_json(c.witness_pair.first), number_json(c.witness_pair.second)}},
          {"pairs", c.pairs},
          {"tau", number_json(c.tau)},
          {"h_continuous_on_sample", c.h_continuous_on_sample}};
}

int cmd_widening(const Settings& s, Report& r) {
  const Expr f = parse_f(s);
  const ModulatingFn h = parse_h(s);
  const EvalDomain inner = EvalDomain::parse(s.str("inner", "0.1:0.9"));
  const double eps = s.real("eps", 0.05);
  const ScanConfig cfg = scan_config(s);
  r.config = {{"f", f.source()}, {"h", s.str("h", "identity")}, {"inner", inner.to_string()}, {"eps", eps}};
  echo_scan(r.config, cfg);

  const WideningProbe p = widening_probe(f, h, {inner.lo, inner.hi}, eps, cfg);
  constexpr std::size_t kShown = 20;
  json lambdas = json::array();
  for (std::size_t i = 0; i < p.lambda_samples.size() && i < kShown; ++i) {
    const auto& l = p.lambda_samples[i];
    lambdas.push_back({{"x", number_json(l.x)}, {"y", number_json(l.y)}, {"lambda", number_json(l.lambda)}});
  }
  r.result = {
      {"inner", {number_json(p.a), number_json(p.b)}},
      {"eps", number_json(p.eps)},
      {"m_eps", number_json(p.m_eps)},
      {"M_eps", number_json(p.M_eps)},
      {"ratio", ratio_json(p.ratio)},
      {"lambda_sample_count", p.lambda_samples.size()},
      {"lambda_samples", lambdas},
      {"hypothesis_flags",
       {{"h_alpha_ge_alpha", flag_json(p.flags.h_alpha_ge_alpha)},
        {"supermultiplicative", flag_json(p.flags.supermultiplicative)},
        {"h_eps", number_json(p.flags.h_eps)},
        {"oscillation", number_json(p.flags.oscillation)},
        {"discrepancy", number_json(p.flags.discrepancy)}}},
  };
  if (p.flags.h_alpha_ge_alpha.state != FlagState::Pass) {
    r.hypothesis_warnings.push_back(std::string("sampled h(a) >= a is ") + to_string(p.flags.h_alpha_ge_alpha.state));
  }
  if (p.flags.supermultiplicative.state != FlagState::Pass) {
    r.hypothesis_warnings.push_back(std::string("sampled supermultiplicativity is ") +
                                    to_string(p.flags.supermultiplicative.state));
  }
  if (!p.ratio.h_continuous_on_sample) {
    r.hypothesis_warnings.push_back("sup ratio " + fmt(p.ratio.sup_ratio) + " exceeds 1 + tau on the sampled pairs");
  }

  r.csv = "x,y,gap,lambda,ratio\n";
  for (const auto& l : p.lambda_samples) {
    const double gap = std::abs(l.y - l.x);
    r.csv += csv_row({fmt(l.x), fmt(l.y), fmt(gap), fmt(l.lambda), fmt(pair_ratio(f, h, l.x, l.y))});
  }
  return kExitOk;
}

int cmd_modulus(const Settings& s, Report& r) {
  const Expr f = parse_f(s);
  const ModulatingFn h = parse_h(s);
  const EvalDomain d = parse_domain(s);
  const std::size_t pairs = s.count("pairs", 2000);
  const std::uint64_t seed = s.count("seed", 0);
  Tolerance tol;
  tol.rel = s.real("tol", tol.rel);
  tol.abs = s.real("tol-abs", tol.abs);
  r.config = {{"f", f.source()}, {"h", s.str("h", "identity")}, {"domain", d.to_string()},
              {"pairs", pairs}, {"seed", seed}, {"tol", tol.rel}, {"tol-abs", tol.abs}};

  const ContinuityRatio c = h_continuity_ratio(f, h, d, pairs, seed, tol);
  const ControlFnReport ctl = control_function_check(h, geometric_deltas(1.0, 1e-12, 121));
  r.result = {{"ratio", ratio_json(c)},
              {"control_function",
               {{"nondecreasing", flag_json(ctl.nondecreasing)},
                {"inf_to_zero", flag_json(ctl.inf_to_zero)},
                {"is_control", ctl.is_control}}}};
  if (!ctl.is_control) r.hypothesis_warnings.push_back("h is not a control function on the sampled deltas");
  r.csv = "sup_ratio,x,y,tau,h_continuous_on_sample,is_control\n" +
          csv_row({fmt(c.sup_ratio), fmt(c.witness_pair.first), fmt(c.witness_pair.second), fmt(c.tau),
                   fmt(c.h_continuous_on_sample), fmt(ctl.is_control)});
  return kExitOk;
}

int cmd_holder(const Settings& s, Report& r) {
  const Expr f = parse_f(s);
  const EvalDomain d = parse_domain(s);
  const std::size_t pairs = s.count("pairs", 2000);
  const std::uint64_t seed = s.count("seed", 0);
  r.config = {{"f", f.source()}, {"domain", d.to_string()}, {"pairs", pairs}, {"seed", seed}};

  const HolderFit fit = holder_fit(f, d, pairs, seed);
  json envelope = json::array();
  for (const auto& [lx, ly] : fit.envelope) envelope.push_back({number_json(lx), number_json(ly)});
  r.result = {{"constant", fit.constant},
              {"H", number_json(fit.H)},
              {"alpha", fit.alpha ? number_json(*fit.alpha) : json(nullptr)},
              {"rms_log_residual", number_json(fit.rms_log_residual)},
              {"pairs_used", fit.pairs_used},
              {"envelope", envelope}};
  if (fit.constant) r.hypothesis_warnings.push_back("constant function: every sampled |df| is below 1e-15");
  r.csv = "log_dx,log_df\n";
  for (const auto& [lx, ly] : fit.cloud) r.csv += csv_row({fmt(lx), fmt(ly)});
  return kExitOk;
}

int cmd_curve(const Settings& s, Report& r) {
  const double exponent = s.real("s", 0.5);
  const double X = s.real("X", 1.0);
  const double Y = s.real("Y", 1.0);
  const std::size_t n = s.count("n", 101);
  const double tol = s.real("tol", 1e-10);
  if (n < 2) throw ConfigError("--n must be >= 2");
  r.config = {{"s", exponent}, {"X", X}, {"Y", Y}, {"n", n}, {"tol", tol}};

  const CurveHeight height = height_max(exponent, X, Y);
  const CurveLength length = curve_length(exponent, X, Y, tol);
  json notes = json::array();
  r.csv = "lambda,value,inclination\n";
  const auto lambdas = grid_points(EvalDomain::closed(0.0, 1.0), n);
  for (double l : lambdas) {
    const double slope = inclination(exponent, l, X, Y);
    if (std::isinf(slope)) notes.push_back(inclination_note(exponent, l));
    r.csv += csv_row({fmt(l), fmt(curve_value(exponent, l, X, Y)), fmt(slope)});
  }
  r.result = {{"height_max", number_json(height.value)},
              {"height_argmax", number_json(height.argmax)},
              {"length", number_json(length.length)},
              {"quadrature_error_estimate", number_json(length.error_estimate)},
              {"converged", length.converged},
              {"inclination_notes", notes}};
  if (!length.converged) r.hypothesis_warnings.push_back("length quadrature stopped above tolerance");
  return kExitOk;
}

int cmd_conjecture(const Settings& s, Report& r) {
  const Expr f = parse_f(s);
  const ModulatingFn h = parse_h(s);
  const EvalDomain d = parse_domain(s);
  const ScanConfig cfg = scan_config(s);
  r.config = {{"f", f.source()}, {"h", s.str("h", "identity")}, {"domain", d.to_string()}};
  echo_scan(r.config, cfg);

  const ConjectureResult c = conjecture_probe(f, h, d, cfg);
  const auto& sd = c.second_derivative;
  json jsd = {{"inf", number_json(sd.inf_value)},
              {"argmin", number_json(sd.argmin)},
              {"min_delta", number_json(sd.min_delta)}};
  if (sd.failure) jsd["failure"] = {{"point", number_json(sd.failure->point)}, {"message", sd.failure->message}};
  r.result = {{"h_half", number_json(c.h_half)},
              {"threshold", number_json(c.threshold)},
              {"second_derivative", jsd},
              {"tau", number_json(c.tau)},
              {"derivative_side", c.derivative_side},
              {"hconvex_verdict", verdict_json(c.hconvex_side)},
              {"consistent", c.consistent}};
  add_warnings(r, c.hconvex_side.warnings);
  if (!c.consistent) r.hypothesis_warnings.push_back("derivative side and h-convexity scan disagree");
  r.csv = "h_half,threshold,second_derivative_inf,argmin,tau,derivative_side,hconvex_status,consistent\n" +
          csv_row({fmt(c.h_half), fmt(c.threshold), fmt(sd.inf_value), fmt(sd.argmin), fmt(c.tau),
                   fmt(c.derivative_side), to_string(c.hconvex_side.status), fmt(c.consistent)});
  if (sd.failure) {
    r.error = evaluation_error(sd.failure->message);
    return kExitEvaluation;
  }
  if (c.hconvex_side.status == VerdictStatus::Indeterminate) {
    r.error = evaluation_error(c.hconvex_side.failure ? c.hconvex_side.failure->message : "indeterminate scan");
    return kExitEvaluation;
  }
  return kExitOk;
}

int cmd_props(const Settings& s, Report& r) {
  const std::string h_text = s.str("h", "identity");
  const ModulatingFn h = ModulatingFn::parse(h_text);
  const std::size_t n = s.count("n", 101);
  r.config = {{"h", h_text}, {"n", n}};
  const HPropertyFlags flags = h_property_check(h, n);
  r.result = h_flags_json(flags);
  if (h.caution_case()) {
    r.hypothesis_warnings.push_back("h=" + h.name() + " is a Caution case (t^k with k <= -1 or k = 0)");
  }
  r.csv = "property,state,worst_margin,witness\n";
  const std::pair<const char*, const SampledFlag*> rows[] = {
      {"nonneg", &flags.nonneg},
      {"nondecreasing", &flags.nondecreasing},
      {"h_alpha_ge_alpha", &flags.h_alpha_ge_alpha},
      {"h_alpha_le_alpha", &flags.h_alpha_le_alpha},
      {"h_sum_le_one", &flags.h_sum_le_one},
      {"supermultiplicative", &flags.supermultiplicative},
      {"control_function", &flags.control_function},
  };
  for (const auto& [name, flag] : rows) {
    std::string witness;
    for (std::size_t i = 0; i < flag->witness.size(); ++i) witness += (i ? ";" : "") + fmt(flag->witness[i]);
    r.csv += csv_row({name, to_string(flag->state), fmt(flag->worst_margin), witness});
  }
  return kExitOk;
}

int cmd_figure1(const Settings& s, Report& r) {
  const std::size_t n = s.count("n", 101);
  if (n < 2) throw ConfigError("--n must be >= 2");
  r.config = {{"n", n}};
  r.result = {{"columns", {"t", "h_half", "h_one", "h_threehalf", "f"}}, {"rows", n}};
  r.csv = figure1_csv(n);
  return kExitOk;
}

std::map<std::string, json> load_config_file(const std::string& path, const std::set<std::string>& allowed) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file " + path + " must hold a JSON object");
  std::map<std::string, json> values;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key()) || it.key() == "config") {
      throw ConfigError("config file " + path + ": key '" + it.key() + "' does not apply here");
    }
    values[it.key()] = it.value();
  }
  return values;
}

OutputFormat parse_format(const std::string& s) {
  if (s == "json") return OutputFormat::Json;
  if (s == "csv") return OutputFormat::Csv;
  if (s == "both") return OutputFormat::Both;
  throw ConfigError("--format expects json, csv or both, got '" + s + "'");
}

void print_error(std::ostream& err, const char* kind, const std::string& message,
                 std::optional<std::size_t> offset = std::nullopt) {
  json j = {{"error", kind}, {"message", message}};
  if (offset) j["offset"] = *offset;
  err << j.dump() << "\n";
}

}  // namespace

ClassSpec parse_class(std::string_view text, const ModulatingFn& h) {
  const auto exponent = [&](std::string_view prefix) {
    return Settings::parse_real(std::string(text.substr(prefix.size())), "class exponent");
  };
  if (text == "convex") return ClassSpec::convex();
  if (text.starts_with("sconvex1:")) return ClassSpec::s_convex_first(exponent("sconvex1:"));
  if (text.starts_with("sconvex1-pinheiro:")) {
    return ClassSpec::s_convex_first_pinheiro(exponent("sconvex1-pinheiro:"));
  }
  if (text.starts_with("sconvex2:")) return ClassSpec::s_convex_second(exponent("sconvex2:"));
  if (text == "godunova-levin") return ClassSpec::godunova_levin();
  if (text == "pfunction") return ClassSpec::p_function();
  if (text == "hconvex") return ClassSpec::h_convex(h);
  if (text == "hconcave") return ClassSpec::h_concave(h);
  if (text == "hmidconvex") return ClassSpec::h_midconvex(h);
  if (text == "hmidconcave") return ClassSpec::h_midconcave(h);
  if (text == "hconvex-geometric") return ClassSpec::h_chord(h);
  throw ConfigError("unknown class '" + std::string(text) + "'");
}

std::string figure1_csv(std::size_t n) {
  if (n < 2) throw PreconditionError("figure 1 data needs n >= 2");
  std::string csv = "t,h_half,h_one,h_threehalf,f\n";
  for (double t : grid_points(EvalDomain::closed(0.0, 1.0), n)) {
    csv += csv_row({format_double(t), format_double(std::sqrt(t)), format_double(t),
                    format_double(t * std::sqrt(t)), format_double(t * t)});
  }
  return csv;
}

void emit_figure1(const std::filesystem::path& path, std::size_t n) {
  Report r;
  r.csv = figure1_csv(n);
  write_report(r, path, OutputFormat::Csv);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks for generalized convexity classes", "hconvex"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  std::map<std::string, std::string> text_values;
  std::map<std::string, bool> bool_values;
  std::map<std::string, std::vector<std::pair<std::string, CLI::Option*>>> options;
  for (const auto& info : commands()) {
    CLI::App* sub = app.add_subcommand(info.name, info.help);
    std::vector<std::string> names = info.flags;
    names.insert(names.end(), kOutputFlags.begin(), kOutputFlags.end());
    for (const auto& name : names) {
      CLI::Option* opt = kBoolFlags.count(name) ? sub->add_flag("--" + name, bool_values[name])
                                                : sub->add_option("--" + name, text_values[name]);
      options[info.name].emplace_back(name, opt);
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    print_error(err, "config", e.what());
    return kExitConfig;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  Report report;
  report.command = command;
  std::optional<std::string> out_path;
  OutputFormat format = OutputFormat::Json;
  bool timing = false;

  int code = kExitOk;
  const auto started = std::chrono::steady_clock::now();
  try {
    std::set<std::string> allowed;
    bool has_config = false;
    for (const auto& [name, opt] : options[command]) {
      allowed.insert(name);
      if (name == "config" && opt->count() > 0) has_config = true;
    }
    std::map<std::string, json> values;
    if (has_config) values = load_config_file(text_values["config"], allowed);
    for (const auto& [name, opt] : options[command]) {
      if (opt->count() == 0 || name == "config") continue;
      if (kBoolFlags.count(name)) {
        values[name] = bool_values[name];
      } else {
        values[name] = text_values[name];
      }
    }
    const Settings settings(std::move(values));
    if (settings.has("out")) out_path = settings.str("out", "");
    format = parse_format(settings.str("format", command == "figure1" ? "csv" : "json"));
    timing = settings.flag("timing");
    if (format == OutputFormat::Both && !out_path) throw ConfigError("--format both needs --out");

    if (command == "check") code = cmd_check(settings, report, false);
    else if (command == "refute") code = cmd_check(settings, report, true);
    else if (command == "theorem1") code = cmd_midconvexity(settings, report);
    else if (command == "theorem2") code = cmd_widening(settings, report);
    else if (command == "modulus") code = cmd_modulus(settings, report);
    else if (command == "holder") code = cmd_holder(settings, report);
    else if (command == "curve") code = cmd_curve(settings, report);
    else if (command == "conjecture") code = cmd_conjecture(settings, report);
    else if (command == "props") code = cmd_props(settings, report);
    else code = cmd_figure1(settings, report);
  } catch (const ParseError& e) {
    print_error(err, "config", std::string("expression: ") + e.what(), e.offset());
    return kExitConfig;
  } catch (const DomainError& e) {
    report.error = evaluation_error(e.what());
    report.result = json::object();
    report.csv.clear();
    code = kExitEvaluation;
  } catch (const ConfigError& e) {
    print_error(err, "config", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    print_error(err, "config", e.what());
    return kExitConfig;
  }
  if (timing) {
    report.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  }

  if (report.error) print_error(err, "evaluation", report.error->value("message", ""));
  try {
    if (out_path) {
      write_report(report, *out_path, format);
    } else if (format == OutputFormat::Csv) {
      out << report.csv;
    } else {
      out << render_json(report);
    }
  } catch (const IoError& e) {
    print_error(err, "io", e.what());
    return kExitEvaluation;
  }
  return code;
}

}  // namespace hconvex
