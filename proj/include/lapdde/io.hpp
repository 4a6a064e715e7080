#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "lapdde/diagnostics.hpp"
#include "lapdde/engine.hpp"
#include "lapdde/graph.hpp"
#include "lapdde/signal.hpp"

namespace lapdde::io {

// NetworkSignal document: keys n, a_bar, h_bar, segments
// ([{t_start, t_end, A, H}], row i = influences on agent i), optional
// event_times and residuals ([{t_start, t_end, values}]).
struct SignalDocument {
  NetworkSignal signal;
  std::optional<EventSequence> events;
  std::optional<ResidualSchedule> residuals;
};

// `path` prefixes every error message (e.g. "signal").
SignalDocument parse_signal(const nlohmann::json& doc, const std::string& path = "");
SignalDocument load_signal_file(const std::filesystem::path& file);
nlohmann::json signal_to_json(const NetworkSignal& signal, const EventSequence* events = nullptr,
                              const ResidualSchedule* residuals = nullptr);

ResidualSchedule parse_residuals(const nlohmann::json& doc, std::size_t n, const std::string& path);
nlohmann::json residuals_to_json(const ResidualSchedule& residuals);

// Shortest-roundtrip-safe decimal (17 significant digits).
std::string format_double(double v);

// Header t,x_1,...,x_n; one row per sample from t0 on (every stride-th).
void write_trajectory_csv(std::ostream& os, const TrajectoryHistory& history, std::size_t stride = 1);
// Header t,u_11,u_12,...,u_nn (row-major).
void write_evolutionary_csv(std::ostream& os, const EvolutionaryMatrix& u);

// {intervals: [{p, t_start, t_end, arcs: [[j,i],...], strong, quasi_strong,
// root}], verdict, epsilon, K, M}; agent ids in the document are 1-based.
nlohmann::json certificate_to_json(const ConnectivityCertificate& cert, double K, double M);

nlohmann::json diagnostics_to_json(const DiagnosticsReport& report);
// Header t,lambda,Lambda,z_1..z_n,diameter.
void write_diagnostics_csv(std::ostream& os, const DiagnosticsReport& report, std::size_t stride = 1);

// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::filesystem::path& file, const std::string& contents);

}  // namespace lapdde::io
