#include "hconvex/report.hpp"

#include <cmath>
#include <fstream>

#include "hconvex/errors.hpp"
#include "hconvex/format.hpp"

namespace hconvex {

using nlohmann::json;

json number_json(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

json sample_json(const ResidualSample& s) {
  return {
      {"x", number_json(s.x)},
      {"y", number_json(s.y)},
      {"t", number_json(s.t)},
      {"lhs", number_json(s.lhs)},
      {"rhs", number_json(s.rhs)},
      {"residual", number_json(s.residual)},
      {"combination_point", number_json(s.combination_point)},
      {"in_domain", s.in_domain},
      {"caution", s.caution},
  };
}

json verdict_json(const Verdict& v) {
  json j = {
      {"class", v.class_name},
      {"status", to_string(v.status)},
      {"worst_residual", number_json(v.worst_residual)},
      {"witness", v.witness ? sample_json(*v.witness) : json(nullptr)},
      {"evaluations", v.evaluations},
      {"out_of_domain_count", v.out_of_domain_count},
      {"skipped_count", v.skipped_count},
      {"tau", number_json(v.tau)},
      {"max_abs_f", number_json(v.max_abs_f)},
      {"min_f", number_json(v.min_f)},
  };
  if (v.failure) {
    j["failure"] = {
        {"x", number_json(v.failure->x)},
        {"y", number_json(v.failure->y)},
        {"t", number_json(v.failure->t)},
        {"point", number_json(v.failure->point)},
        {"message", v.failure->message},
    };
  }
  return j;
}

json flag_json(const SampledFlag& f) {
  json witness = json::array();
  for (double w : f.witness) witness.push_back(number_json(w));
  json j = {
      {"state", to_string(f.state)},
      {"worst_margin", number_json(f.worst_margin)},
      {"witness", witness},
      {"samples", f.samples},
      {"grid", f.grid},
  };
  if (!f.note.empty()) j["note"] = f.note;
  return j;
}

json h_flags_json(const HPropertyFlags& f) {
  return {
      {"nonneg", flag_json(f.nonneg)},
      {"nondecreasing", flag_json(f.nondecreasing)},
      {"h_alpha_ge_alpha", flag_json(f.h_alpha_ge_alpha)},
      {"h_alpha_le_alpha", flag_json(f.h_alpha_le_alpha)},
      {"h_sum_le_one", flag_json(f.h_sum_le_one)},
      {"supermultiplicative", flag_json(f.supermultiplicative)},
      {"control_function", flag_json(f.control_function)},
      {"h_zero_plus", f.h_zero_plus ? number_json(*f.h_zero_plus) : json(nullptr)},
      {"h_one", f.h_one ? number_json(*f.h_one) : json(nullptr)},
  };
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) line += ',';
    line += csv_field(fields[i]);
  }
  return line + "\n";
}

std::string render_json(const Report& r) {
  json j = {
      {"schema", kReportSchema},
      {"tool_version", kToolVersion},
      {"command", r.command},
      {"config", r.config},
      {"result", r.result},
      {"hypothesis_warnings", r.hypothesis_warnings},
  };
  if (r.error) j["error"] = *r.error;
  if (r.elapsed_ms) j["timing"] = {{"elapsed_ms", *r.elapsed_ms}};
  return j.dump(2) + "\n";
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

void write_report(const Report& r, const std::filesystem::path& path, OutputFormat format) {
  switch (format) {
    case OutputFormat::Json: write_file(path, render_json(r)); break;
    case OutputFormat::Csv: write_file(path, r.csv); break;
    case OutputFormat::Both: {
      std::filesystem::path stem = path;
      if (stem.extension() == ".json" || stem.extension() == ".csv") stem.replace_extension();
      write_file(std::filesystem::path(stem.string() + ".json"), render_json(r));
      write_file(std::filesystem::path(stem.string() + ".csv"), r.csv);
      break;
    }
  }
}

}  // namespace hconvex
