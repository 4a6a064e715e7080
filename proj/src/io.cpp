#include "lapdde/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lapdde/error.hpp"

namespace lapdde::io {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string at_index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ValidationError((path.empty() ? "document" : path) + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ValidationError((path.empty() ? "document" : path) + ": missing required key '" + key + "'");
  }
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ValidationError(path + ": expected a number");
  return v.get<double>();
}

std::size_t count(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0) throw ValidationError(path + ": expected a nonnegative integer");
  return v.get<std::size_t>();
}

SquareMatrix matrix(const json& v, std::size_t n, const std::string& path) {
  if (!v.is_array() || v.size() != n) {
    throw ValidationError(path + ": expected " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = v[i];
    if (!row.is_array() || row.size() != n) {
      throw ValidationError(at_index(path, i) + ": expected " + std::to_string(n) + " columns");
    }
    for (std::size_t j = 0; j < n; ++j) m(i, j) = number(row[j], at_index(at_index(path, i), j));
  }
  return m;
}

json matrix_json(const SquareMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto r = m.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return rows;
}

// Re-raise constructor validation errors with the document path in front.
template <typename F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw ValidationError((path.empty() ? std::string() : path + ".") + e.what());
  }
}

}  // namespace

ResidualSchedule parse_residuals(const json& doc, std::size_t n, const std::string& path) {
  if (!doc.is_array()) throw ValidationError(path + ": expected an array of pieces");
  std::vector<PiecewiseSchedule::Piece> pieces;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const std::string p = at_index(path, k);
    PiecewiseSchedule::Piece piece;
    piece.t_start = number(require(doc[k], "t_start", p), join(p, "t_start"));
    piece.t_end = number(require(doc[k], "t_end", p), join(p, "t_end"));
    const json& vals = require(doc[k], "values", p);
    if (!vals.is_array() || vals.size() != n) {
      throw ValidationError(join(p, "values") + ": expected " + std::to_string(n) + " entries");
    }
    for (std::size_t i = 0; i < n; ++i) piece.values.push_back(number(vals[i], at_index(join(p, "values"), i)));
    pieces.push_back(std::move(piece));
  }
  try {
    return ResidualSchedule(n, std::move(pieces));
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

SignalDocument parse_signal(const json& doc, const std::string& path) {
  const std::size_t n = count(require(doc, "n", path), join(path, "n"));
  const double a_bar = number(require(doc, "a_bar", path), join(path, "a_bar"));
  const double h_bar = number(require(doc, "h_bar", path), join(path, "h_bar"));
  const json& segs = require(doc, "segments", path);
  const std::string seg_path = join(path, "segments");
  if (!segs.is_array() || segs.empty()) throw ValidationError(seg_path + ": expected a non-empty array");
  std::vector<Segment> segments;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    const std::string p = at_index(seg_path, s);
    Segment seg;
    seg.t_start = number(require(segs[s], "t_start", p), join(p, "t_start"));
    seg.t_end = number(require(segs[s], "t_end", p), join(p, "t_end"));
    seg.weights = matrix(require(segs[s], "A", p), n, join(p, "A"));
    seg.delays = matrix(require(segs[s], "H", p), n, join(p, "H"));
    segments.push_back(std::move(seg));
  }
  SignalDocument out{with_path(path, [&] { return NetworkSignal(n, a_bar, h_bar, std::move(segments)); }),
                     std::nullopt, std::nullopt};
  if (auto it = doc.find("event_times"); it != doc.end() && !it->is_null()) {
    const std::string p = join(path, "event_times");
    if (!it->is_array()) throw ValidationError(p + ": expected an array of times");
    std::vector<double> t;
    for (std::size_t k = 0; k < it->size(); ++k) t.push_back(number((*it)[k], at_index(p, k)));
    out.events = with_path(path, [&] { return EventSequence(std::move(t)); });
  }
  if (auto it = doc.find("residuals"); it != doc.end() && !it->is_null()) {
    out.residuals = parse_residuals(*it, n, join(path, "residuals"));
  }
  return out;
}

SignalDocument load_signal_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError(file.string() + ": cannot open file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(file.string() + ": malformed JSON: " + e.what());
  }
  return parse_signal(doc);
}

json residuals_to_json(const ResidualSchedule& residuals) {
  json arr = json::array();
  for (const auto& p : residuals.schedule().pieces()) {
    arr.push_back({{"t_start", p.t_start}, {"t_end", p.t_end}, {"values", p.values}});
  }
  return arr;
}

json signal_to_json(const NetworkSignal& signal, const EventSequence* events, const ResidualSchedule* residuals) {
  json doc;
  doc["n"] = signal.agents();
  doc["a_bar"] = signal.a_bar();
  doc["h_bar"] = signal.h_bar();
  json segs = json::array();
  for (const auto& s : signal.segments()) {
    segs.push_back({{"t_start", s.t_start}, {"t_end", s.t_end}, {"A", matrix_json(s.weights)},
                    {"H", matrix_json(s.delays)}});
  }
  doc["segments"] = std::move(segs);
  if (events != nullptr) {
    const auto t = events->times();
    doc["event_times"] = std::vector<double>(t.begin(), t.end());
  }
  if (residuals != nullptr) doc["residuals"] = residuals_to_json(*residuals);
  return doc;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryHistory& history, std::size_t stride) {
  if (stride == 0) stride = 1;
  const std::size_t n = history.agents();
  const std::size_t lanes = history.lanes();
  os << "t";
  for (std::size_t i = 1; i <= n; ++i) {
    if (lanes == 1) {
      os << ",x_" << i;
    } else {
      for (std::size_t b = 1; b <= lanes; ++b) os << ",x_" << i << "_" << b;
    }
  }
  os << '\n';
  const auto times = history.times();
  for (std::size_t k = history.first_index(); k < times.size(); ++k) {
    if ((k - history.first_index()) % stride != 0 && k + 1 != times.size()) continue;
    os << format_double(times[k]);
    for (double v : history.state(k)) os << ',' << format_double(v);
    os << '\n';
  }
}

void write_evolutionary_csv(std::ostream& os, const EvolutionaryMatrix& u) {
  const std::size_t n = u.agents();
  os << "t";
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) os << ",u_" << i << j;
  }
  os << '\n';
  for (std::size_t k = 0; k < u.samples(); ++k) {
    os << format_double(u.time(k));
    for (double v : u.matrix(k)) os << ',' << format_double(v);
    os << '\n';
  }
}

json certificate_to_json(const ConnectivityCertificate& cert, double K, double M) {
  json intervals = json::array();
  for (const auto& iv : cert.intervals) {
    json arcs = json::array();
    for (const auto& [j, i] : iv.arcs) arcs.push_back({j + 1, i + 1});
    intervals.push_back({{"p", iv.p},
                         {"t_start", iv.t_start},
                         {"t_end", iv.t_end},
                         {"arcs", std::move(arcs)},
                         {"strong", iv.strong},
                         {"quasi_strong", iv.quasi_strong},
                         {"root", iv.root ? json(*iv.root + 1) : json(nullptr)}});
  }
  return {{"intervals", std::move(intervals)},
          {"verdict", cert.verdict},
          {"quasi_verdict", cert.quasi_verdict},
          {"epsilon", cert.epsilon},
          {"K", K},
          {"M", M}};
}

json diagnostics_to_json(const DiagnosticsReport& r) {
  json doc;
  doc["n"] = r.agents;
  doc["h_bar"] = r.h_bar;
  doc["t"] = r.extrema.times;
  doc["lambda"] = r.extrema.lower;
  doc["Lambda"] = r.extrema.upper;
  json z = json::array();
  for (std::size_t k = 0; k < r.agents; ++k) {
    std::vector<double> curve;
    curve.reserve(r.ordered.z.size());
    for (const auto& row : r.ordered.z) curve.push_back(row[k]);
    z.push_back(std::move(curve));
  }
  doc["z"] = std::move(z);
  doc["diameter"] = r.diameter;
  json windows = json::array();
  for (const auto& w : r.residual_windows) {
    json per_agent = json::array();
    for (std::size_t i = 0; i < r.agents; ++i) {
      std::vector<double> curve;
      curve.reserve(w.values.size());
      for (const auto& row : w.values) curve.push_back(row[i]);
      per_agent.push_back(std::move(curve));
    }
    windows.push_back({{"T", w.window}, {"integrals", std::move(per_agent)}});
  }
  doc["residual_window_integrals"] = std::move(windows);
  const auto& v = r.verdict;
  json verdict = {{"outcome", to_string(v.outcome)},
                  {"tolerance", v.tolerance},
                  {"window", v.window},
                  {"floor", v.floor},
                  {"final_diameter", v.final_diameter},
                  {"synchrony_asserted", v.synchrony_asserted}};
  verdict["c_star"] = v.outcome == ConsensusOutcome::converged_common_limit ? json(v.c_star)
                      : v.outcome == ConsensusOutcome::diverged_to_minus_infinity ? json("-inf")
                                                                                    : json(nullptr);
  verdict["time_to_tolerance"] = v.time_to_tolerance ? json(*v.time_to_tolerance) : json(nullptr);
  doc["verdict"] = std::move(verdict);
  json viol = json::array();
  for (const auto& m : r.monotonicity) viol.push_back({m.t, m.magnitude});
  doc["monotonicity_tolerance"] = r.monotonicity_tolerance;
  doc["monotonicity_violations"] = std::move(viol);
  return doc;
}

void write_diagnostics_csv(std::ostream& os, const DiagnosticsReport& r, std::size_t stride) {
  if (stride == 0) stride = 1;
  os << "t,lambda,Lambda";
  for (std::size_t k = 1; k <= r.agents; ++k) os << ",z_" << k;
  os << ",diameter\n";
  const std::size_t rows = r.extrema.times.size();
  for (std::size_t s = 0; s < rows; ++s) {
    if (s % stride != 0 && s + 1 != rows) continue;
    os << format_double(r.extrema.times[s]) << ',' << format_double(r.extrema.lower[s]) << ','
       << format_double(r.extrema.upper[s]);
    for (double z : r.ordered.z[s]) os << ',' << format_double(z);
    os << ',' << format_double(r.diameter[s]) << '\n';
  }
}

void write_file_atomic(const std::filesystem::path& file, const std::string& contents) {
  std::filesystem::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

}  // namespace lapdde::io
