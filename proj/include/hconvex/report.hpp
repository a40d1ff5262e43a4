#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hconvex/certify.hpp"
#include "hconvex/continuity.hpp"
#include "hconvex/funclasses.hpp"

namespace hconvex {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

enum class OutputFormat { Json, Csv, Both };

struct Report {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json result = nlohmann::json::object();
  std::vector<std::string> hypothesis_warnings;
  std::optional<nlohmann::json> error;
  std::optional<double> elapsed_ms;  // only with --timing; not covered by determinism
  std::string csv;                   // flattened payload, header line included
};

// Finite values as numbers, inf/-inf/nan as strings.
nlohmann::json number_json(double v);

nlohmann::json sample_json(const ResidualSample& s);
nlohmann::json verdict_json(const Verdict& v);
nlohmann::json flag_json(const SampledFlag& f);
nlohmann::json h_flags_json(const HPropertyFlags& f);

// Quotes a CSV field when it holds a comma, quote or newline.
std::string csv_field(const std::string& s);
std::string csv_row(const std::vector<std::string>& fields);

// Sorted keys, two-space indent, trailing newline.
std::string render_json(const Report& r);

// Json and Csv write exactly `path`. Both writes <stem>.json and <stem>.csv,
// where a trailing .json or .csv on `path` is dropped first.
void write_report(const Report& r, const std::filesystem::path& path, OutputFormat format);

}  // namespace hconvex
