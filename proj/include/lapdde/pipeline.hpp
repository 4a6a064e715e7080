#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lapdde/diagnostics.hpp"
#include "lapdde/graph.hpp"
#include "lapdde/history.hpp"
#include "lapdde/scenarios.hpp"

// Configuration-driven runs shared by the command-line front end: one JSON
// document holds the scenario (or inline signal), integration, diagnostics
// and certificate sections.
namespace lapdde::pipeline {

struct ScenarioInfo {
  std::string name;
  std::string summary;
  std::string parameters;
};

const std::vector<ScenarioInfo>& scenario_catalog();

// Defaults for every section; user documents are merged on top.
nlohmann::json default_config();
nlohmann::json load_config(const std::filesystem::path& file);
// Merge `overlay` into `base` recursively (objects merge, everything else replaces).
void merge_into(nlohmann::json& base, const nlohmann::json& overlay);
// Set a dotted key ("scenario.delay") to `value`, parsed as JSON when
// possible and kept as a string otherwise.
void apply_override(nlohmann::json& config, const std::string& dotted_key, const std::string& value);

struct ResolvedProblem {
  scenarios::Scenario scenario;
  std::optional<ResidualSchedule> residuals;
};

// Builds the signal from `signal`, `signal_file` or `scenario` (in that order).
ResolvedProblem resolve_problem(const nlohmann::json& config);

struct RunResult {
  ResolvedProblem problem;
  TrajectoryHistory history;
  DiagnosticsReport report;
  ConnectivityCertificate certificate;
  double K = 1.0;
  double M = 0.0;
  bool inequality = false;
};

RunResult execute_run(const nlohmann::json& config);
// trajectory.csv, diagnostics.json, diagnostics.csv, certificate.json.
void write_run_outputs(const RunResult& result, const nlohmann::json& config, const std::filesystem::path& dir);
std::string verdict_summary(const RunResult& result);

struct CertifyResult {
  ConnectivityCertificate certificate;
  double epsilon = 0.0;
  double K = 1.0;
  double M = 0.0;
  double persistence_threshold = 0.0;
  bool type_symmetric = false;
  bool persistent_connected = false;
  bool branch_i = false;   // type-symmetry + connected persistent graph
  bool branch_ii = false;  // repeated strong connectivity
  bool quasi = false;      // repeated quasi-strong connectivity (equations only)
};

CertifyResult execute_certify(const nlohmann::json& config);
nlohmann::json certify_to_json(const CertifyResult& result);

struct SweepRow {
  std::string value;
  std::string verdict;
  std::optional<double> c_star;
  std::optional<double> final_diameter;
  std::optional<double> time_to_tolerance;
};

// One run per value (certificate-only when the parameter lives under
// "certificate.", where the verdict reads "i:pass ii:fail"), at most `jobs`
// at a time. Rows keep the order of `values`.
std::vector<SweepRow> execute_sweep(const nlohmann::json& config, const std::string& param,
                                    const std::vector<std::string>& values, std::size_t jobs);
// Header value,verdict,c_star,final_diameter,time_to_tolerance.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace lapdde::pipeline
