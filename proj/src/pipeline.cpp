#include "lapdde/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <thread>

#include "lapdde/engine.hpp"
#include "lapdde/error.hpp"
#include "lapdde/io.hpp"

namespace lapdde::pipeline {

using nlohmann::json;

namespace {

const json* find(const json& obj, const std::string& key) {
  if (!obj.is_object()) return nullptr;
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double get_number(const json& obj, const std::string& key, const std::string& path, double fallback) {
  const json* v = find(obj, key);
  if (v == nullptr) return fallback;
  if (!v->is_number()) throw ValidationError(path + "." + key + ": expected a number");
  return v->get<double>();
}

double require_number(const json& obj, const std::string& key, const std::string& path) {
  const json* v = find(obj, key);
  if (v == nullptr) throw ValidationError(path + ": missing required key '" + key + "'");
  if (!v->is_number()) throw ValidationError(path + "." + key + ": expected a number");
  return v->get<double>();
}

std::size_t get_count(const json& obj, const std::string& key, const std::string& path, std::size_t fallback) {
  const json* v = find(obj, key);
  if (v == nullptr) return fallback;
  if (!v->is_number_integer() || v->get<long long>() < 0) {
    throw ValidationError(path + "." + key + ": expected a nonnegative integer");
  }
  return v->get<std::size_t>();
}

template <typename T>
std::vector<T> get_list(const json& obj, const std::string& key, const std::string& path, std::vector<T> fallback) {
  const json* v = find(obj, key);
  if (v == nullptr) return fallback;
  if (!v->is_array()) throw ValidationError(path + "." + key + ": expected an array");
  std::vector<T> out;
  for (std::size_t k = 0; k < v->size(); ++k) {
    const json& e = (*v)[k];
    if constexpr (std::is_same_v<T, double>) {
      if (!e.is_number()) throw ValidationError(path + "." + key + "[" + std::to_string(k) + "]: expected a number");
    } else {
      if (!e.is_number_integer() || e.get<long long>() < 0) {
        throw ValidationError(path + "." + key + "[" + std::to_string(k) + "]: expected a nonnegative integer");
      }
    }
    out.push_back(e.get<T>());
  }
  return out;
}

SquareMatrix cycle(std::size_t n, double w, bool directed) {
  SquareMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    a((i + 1) % n, i) = w;  // arc i -> i+1
    if (!directed) a(i, (i + 1) % n) = w;
  }
  return a;
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ValidationError(path + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return it.key() == a; }) == allowed.end()) {
      throw ValidationError(path + ": unknown key '" + it.key() + "'");
    }
  }
}

void check_sections(const json& config) {
  check_keys(config, "config",
             {"scenario", "signal", "signal_file", "integration", "diagnostics", "certificate", "output", "seed"});
  check_keys(config.at("integration"), "integration", {"t0", "t_end", "step", "initial", "prehistory"});
  check_keys(config.at("diagnostics"), "diagnostics",
             {"tolerance", "window", "floor", "monotonicity_tolerance", "residual_windows"});
  check_keys(config.at("certificate"), "certificate",
             {"epsilon", "K", "events", "event_period", "persistence_threshold"});
  check_keys(config.at("output"), "output", {"stride"});
  if (!config.at("seed").is_number_integer() || config.at("seed").get<long long>() < 0) throw ValidationError("seed: expected a nonnegative integer");
}

double scenario_horizon(const json& config) {
  const json& integ = config.at("integration");
  const json& sc = config.at("scenario");
  if (const json* h = find(sc, "horizon")) {
    if (!h->is_number()) throw ValidationError("scenario.horizon: expected a number");
    return h->get<double>();
  }
  if (const json* t = find(integ, "t_end")) {
    if (!t->is_number()) throw ValidationError("integration.t_end: expected a number");
    return t->get<double>();
  }
  return 100.0;
}

template <typename F>
auto scenario_scope(F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("scenario.") + e.what());
  }
}

scenarios::Scenario build_scenario(const json& config) {
  const json& sc = config.at("scenario");
  const std::string path = "scenario";
  const json* name_v = find(sc, "name");
  if (name_v == nullptr) throw ValidationError("scenario: missing required key 'name' (or provide 'signal')");
  if (!name_v->is_string()) throw ValidationError("scenario.name: expected a string");
  const std::string name = name_v->get<std::string>();
  const double delay = get_number(sc, "delay", path, 0.0);

  if (name == "delayed_ring") {
    check_keys(sc, path, {"name", "n", "weight", "delay", "horizon", "residuals"});
    const std::size_t n = static_cast<std::size_t>(require_number(sc, "n", path));
    const double w = get_number(sc, "weight", path, 1.0);
    return scenario_scope([&] { return scenarios::Scenario{scenarios::delayed_ring(n, w, delay, scenario_horizon(config)), std::nullopt}; });
  }
  if (name == "intermittent") {
    check_keys(sc, path, {"name", "n", "weight", "directed", "base", "active", "silence", "active_duration",
                          "silence_start", "silence_growth", "delay", "horizon", "residuals"});
    const std::size_t n = get_count(sc, "n", path, 3);
    const double w = get_number(sc, "weight", path, 1.0);
    bool directed = false;
    if (const json* d = find(sc, "directed")) {
      if (!d->is_boolean()) throw ValidationError("scenario.directed: expected a boolean");
      directed = d->get<bool>();
    }
    SquareMatrix base = cycle(n, w, directed);
    if (const json* b = find(sc, "base")) {
      std::vector<std::vector<double>> rows;
      try {
        rows = b->get<std::vector<std::vector<double>>>();
      } catch (const json::exception&) {
        throw ValidationError("scenario.base: expected a square matrix");
      }
      base = scenario_scope([&] { return SquareMatrix::from_rows(rows); });
    }
    std::vector<double> active = get_list<double>(sc, "active", path, {});
    std::vector<double> silence = get_list<double>(sc, "silence", path, {});
    if (active.empty()) {
      // Geometric silences until the horizon is covered.
      const double horizon = scenario_horizon(config);
      const double burst = get_number(sc, "active_duration", path, 1.0);
      double gap = get_number(sc, "silence_start", path, 1.0);
      const double growth = get_number(sc, "silence_growth", path, 2.0);
      if (!(burst > 0.0) || !(gap >= 0.0) || !(growth >= 1.0)) {
        throw ValidationError("scenario: need active_duration > 0, silence_start >= 0, silence_growth >= 1");
      }
      double t = 0.0;
      while (t < horizon) {
        active.push_back(burst);
        silence.push_back(gap);
        t += burst + gap;
        gap *= growth;
      }
    }
    return scenario_scope([&] { return scenarios::intermittent(base, active, silence, delay); });
  }
  if (name == "alternating_reciprocal") {
    check_keys(sc, path, {"name", "weight", "period", "agents", "delay", "period_growth", "max_period", "cycles",
                          "horizon", "residuals"});
    scenarios::AlternatingParams p;
    p.weight = get_number(sc, "weight", path, p.weight);
    p.period = get_number(sc, "period", path, p.period);
    p.agents = get_count(sc, "agents", path, p.agents);
    p.delay = delay;
    p.period_growth = get_number(sc, "period_growth", path, p.period_growth);
    if (find(sc, "max_period") != nullptr) p.max_period = require_number(sc, "max_period", path);
    const std::size_t default_cycles = static_cast<std::size_t>(std::ceil(scenario_horizon(config) / p.period));
    p.cycles = get_count(sc, "cycles", path, std::max<std::size_t>(default_cycles, 1));
    return scenario_scope([&] { return scenarios::alternating_reciprocal(p); });
  }
  if (name == "imbalance_divergence") {
    check_keys(sc, path, {"name", "rounds", "round_length", "a_bar", "exponents", "delay", "horizon", "residuals"});
    scenarios::ImbalanceParams p;
    p.rounds = get_count(sc, "rounds", path, p.rounds);
    p.round_length = get_number(sc, "round_length", path, p.round_length);
    p.a_bar = get_number(sc, "a_bar", path, p.a_bar);
    p.exponents = get_list<double>(sc, "exponents", path, p.exponents);
    p.delay = delay;
    return scenario_scope([&] { return scenarios::Scenario{scenarios::imbalance_divergence(p), std::nullopt}; });
  }
  if (name == "disconnected_clusters") {
    check_keys(sc, path, {"name", "sizes", "intra_weights", "delay", "horizon", "residuals"});
    const auto sizes = get_list<std::size_t>(sc, "sizes", path, {2, 2});
    const auto weights = get_list<double>(sc, "intra_weights", path, std::vector<double>(sizes.size(), 1.0));
    return scenario_scope([&] {
      return scenarios::Scenario{scenarios::disconnected_clusters(sizes, weights, scenario_horizon(config), delay),
                                 std::nullopt};
    });
  }
  if (name == "random") {
    check_keys(sc, path, {"name", "n", "segments", "a_bar", "h_bar", "delay", "density", "type_symmetric_K",
                          "horizon", "residuals"});
    scenarios::RandomSignalParams p;
    p.agents = get_count(sc, "n", path, p.agents);
    p.segments = get_count(sc, "segments", path, p.segments);
    p.a_bar = get_number(sc, "a_bar", path, p.a_bar);
    p.h_bar = get_number(sc, "h_bar", path, delay);
    p.horizon = scenario_horizon(config);
    p.density = get_number(sc, "density", path, p.density);
    if (find(sc, "type_symmetric_K") != nullptr) p.type_symmetric_K = require_number(sc, "type_symmetric_K", path);
    p.seed = config.at("seed").get<std::uint64_t>();
    return scenario_scope([&] { return scenarios::Scenario{scenarios::random_signal(p), std::nullopt}; });
  }
  throw ValidationError("scenario.name: unknown scenario '" + name + "' (see `scenarios list`)");
}

EventSequence resolve_events(const json& config, const ResolvedProblem& problem) {
  const json& cert = config.at("certificate");
  const double horizon = problem.scenario.signal.horizon();
  const json* ev = find(cert, "events");
  if (ev == nullptr || (ev->is_string() && ev->get<std::string>() == "scenario")) {
    if (problem.scenario.events) return *problem.scenario.events;
    return EventSequence::uniform(get_number(cert, "event_period", "certificate", 1.0), horizon, true);
  }
  if (ev->is_string()) {
    const std::string text = ev->get<std::string>();
    if (text.rfind("uniform:", 0) == 0) {
      double period = 0.0;
      try {
        period = std::stod(text.substr(8));
      } catch (const std::exception&) {
        throw ValidationError("certificate.events: malformed uniform period in '" + text + "'");
      }
      try {
        return EventSequence::uniform(period, horizon, true);
      } catch (const ValidationError& e) {
        throw ValidationError(std::string("certificate.") + e.what());
      }
    }
    throw ValidationError("certificate.events: expected an array, \"scenario\" or \"uniform:<period>\"");
  }
  const auto times = get_list<double>(cert, "events", "certificate", {});
  try {
    return EventSequence(times);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("certificate.") + e.what());
  }
}

SimulationConfig make_sim_config(const json& config, const ResolvedProblem& problem) {
  const json& integ = config.at("integration");
  const std::string path = "integration";
  const NetworkSignal& signal = problem.scenario.signal;
  const std::size_t n = signal.agents();
  SimulationConfig sim;
  sim.t0 = get_number(integ, "t0", path, 0.0);
  sim.t_end = get_number(integ, "t_end", path, signal.horizon());
  double step = 1e-3;
  if (signal.h_bar() > 0.0) step = std::min(step, signal.h_bar() / 4.0);
  if (n > 1 && signal.a_bar() > 0.0) step = std::min(step, 0.1 / (static_cast<double>(n - 1) * signal.a_bar()));
  sim.step = get_number(integ, "step", path, step);
  std::vector<double> initial(n, 0.0);
  if (n > 1) {
    for (std::size_t i = 0; i < n; ++i) initial[i] = 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  sim.initial_point = get_list<double>(integ, "initial", path, initial);
  if (const json* pre = find(integ, "prehistory")) {
    const auto phi = get_list<double>(integ, "prehistory", path, {});
    if (phi.size() != n) throw ValidationError("integration.prehistory: expected " + std::to_string(n) + " values");
    (void)pre;
    sim.prehistory = Prehistory::constant(phi);
  }
  sim.residuals = problem.residuals;
  return sim;
}

ReportOptions make_report_options(const json& config, bool inequality) {
  const json& d = config.at("diagnostics");
  ReportOptions o;
  o.verdict.tolerance = get_number(d, "tolerance", "diagnostics", o.verdict.tolerance);
  o.verdict.window = get_number(d, "window", "diagnostics", o.verdict.window);
  o.verdict.floor = get_number(d, "floor", "diagnostics", o.verdict.floor);
  o.monotonicity_tolerance = get_number(d, "monotonicity_tolerance", "diagnostics", o.monotonicity_tolerance);
  o.residual_windows = get_list<double>(d, "residual_windows", "diagnostics", o.residual_windows);
  o.equation_run = !inequality;
  return o;
}

// 1.0e0 style: one decimal, exponent without sign padding.
std::string short_scientific(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1e", v);
  std::string s(buf);
  const auto e = s.find('e');
  if (e == std::string::npos) return s;
  return s.substr(0, e + 1) + std::to_string(std::stoi(s.substr(e + 1)));
}

std::string csv_number(const std::optional<double>& v) { return v ? io::format_double(*v) : std::string(); }

}  // namespace

const std::vector<ScenarioInfo>& scenario_catalog() {
  static const std::vector<ScenarioInfo> catalog{
      {"delayed_ring", "constant undirected ring with uniform delay", "n, weight=1, delay=0, horizon"},
      {"intermittent", "base matrix alternating with silence; events at burst starts",
       "n=3, weight=1, directed=false (ring) or base, active/silence lists or active_duration=1, silence_start=1, "
       "silence_growth=2, delay=0, horizon"},
      {"alternating_reciprocal", "chain whose links answer each other half a period later",
       "weight=1, period=2, agents=2, cycles, delay=0, period_growth=1, max_period"},
      {"imbalance_divergence", "3 agents, arc integrals diverging at different rates",
       "rounds=64, round_length=1, a_bar=1, exponents=[0.25,0.5,0.75], delay=0"},
      {"disconnected_clusters", "block-diagonal complete clusters", "sizes=[2,2], intra_weights, horizon, delay=0"},
      {"random", "random piecewise-constant signal (uses the top-level seed)",
       "n=3, segments=6, a_bar=1, h_bar=delay, density=0.7, type_symmetric_K, horizon"},
  };
  return catalog;
}

json default_config() {
  return {{"scenario", json::object()},
          {"integration", json::object()},
          {"diagnostics",
           {{"tolerance", 1e-6},
            {"window", 0.0},
            {"floor", -1e6},
            {"monotonicity_tolerance", 1e-9},
            {"residual_windows", {1.0, 5.0, 10.0}}}},
          {"certificate", {{"epsilon", 1e-3}, {"K", 1.0}, {"persistence_threshold", 1.0}, {"event_period", 1.0}}},
          {"output", {{"stride", 1}}},
          {"seed", 1}};
}

void merge_into(json& base, const json& overlay) {
  if (!base.is_object() || !overlay.is_object()) {
    base = overlay;
    return;
  }
  for (auto it = overlay.begin(); it != overlay.end(); ++it) {
    if (base.contains(it.key()) && base[it.key()].is_object() && it.value().is_object()) {
      merge_into(base[it.key()], it.value());
    } else {
      base[it.key()] = it.value();
    }
  }
}

json load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError(file.string() + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(file.string() + ": malformed JSON: " + e.what());
  }
  if (!doc.is_object()) throw ValidationError(file.string() + ": top level must be an object");
  json cfg = default_config();
  merge_into(cfg, doc);
  return cfg;
}

void apply_override(json& config, const std::string& dotted_key, const std::string& value) {
  if (dotted_key.empty()) throw ValidationError("override: empty key");
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;
  }
  json* node = &config;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted_key.find('.', start);
    const std::string part = dotted_key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ValidationError("override: malformed key '" + dotted_key + "'");
    if (!node->is_object()) {
      throw ValidationError("override: '" + dotted_key + "' descends into a non-object value");
    }
    if (dot == std::string::npos) {
      (*node)[part] = parsed;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

ResolvedProblem resolve_problem(const json& config) {
  check_sections(config);
  if (const json* sig = find(config, "signal")) {
    auto doc = io::parse_signal(*sig, "signal");
    return {{std::move(doc.signal), std::move(doc.events)}, std::move(doc.residuals)};
  }
  if (const json* file = find(config, "signal_file")) {
    if (!file->is_string()) throw ValidationError("signal_file: expected a path string");
    auto doc = io::load_signal_file(file->get<std::string>());
    return {{std::move(doc.signal), std::move(doc.events)}, std::move(doc.residuals)};
  }
  ResolvedProblem out{build_scenario(config), std::nullopt};
  if (const json* res = find(config.at("scenario"), "residuals")) {
    out.residuals = io::parse_residuals(*res, out.scenario.signal.agents(), "scenario.residuals");
  }
  return out;
}

RunResult execute_run(const json& config) {
  ResolvedProblem problem = resolve_problem(config);
  const SimulationConfig sim = make_sim_config(config, problem);
  const bool inequality = sim.residuals.has_value();
  TrajectoryHistory history = inequality ? integrate_inequality(problem.scenario.signal, sim)
                                         : integrate_equation(problem.scenario.signal, sim);
  const ReportOptions opts = make_report_options(config, inequality);
  DiagnosticsReport report = make_report(history, sim.residuals ? &*sim.residuals : nullptr, opts);

  const json& cert = config.at("certificate");
  const double epsilon = get_number(cert, "epsilon", "certificate", 1e-3);
  const double K = get_number(cert, "K", "certificate", 1.0);
  const EventSequence events = resolve_events(config, problem);
  ConnectivityCertificate certificate = repeated_strong_connectivity(problem.scenario.signal, events, epsilon);
  const double M = m_bound(problem.scenario.signal, events);
  return {std::move(problem), std::move(history), std::move(report), std::move(certificate), K, M, inequality};
}

void write_run_outputs(const RunResult& result, const json& config, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::size_t stride = get_count(config.at("output"), "stride", "output", 1);
  {
    std::ostringstream os;
    io::write_trajectory_csv(os, result.history, stride);
    io::write_file_atomic(dir / "trajectory.csv", os.str());
  }
  {
    std::ostringstream os;
    io::write_diagnostics_csv(os, result.report, stride);
    io::write_file_atomic(dir / "diagnostics.csv", os.str());
  }
  io::write_file_atomic(dir / "diagnostics.json", io::diagnostics_to_json(result.report).dump(1) + "\n");
  io::write_file_atomic(dir / "certificate.json",
                        io::certificate_to_json(result.certificate, result.K, result.M).dump(1) + "\n");
}

std::string verdict_summary(const RunResult& result) {
  const auto& v = result.report.verdict;
  std::ostringstream os;
  os << "verdict: ";
  char buf[64];
  switch (v.outcome) {
    case ConsensusOutcome::converged_common_limit:
      os << "converged c*≈" << short_scientific(v.c_star);
      break;
    case ConsensusOutcome::diverged_to_minus_infinity:
      os << "diverged to -inf (no synchrony asserted)";
      break;
    case ConsensusOutcome::not_converged_at_horizon:
      os << "not converged at horizon";
      break;
  }
  std::snprintf(buf, sizeof buf, "%.3e", v.final_diameter);
  os << " (final diameter " << buf << ", tolerance " << v.tolerance << ")";
  return os.str();
}

CertifyResult execute_certify(const json& config) {
  const ResolvedProblem problem = resolve_problem(config);
  const NetworkSignal& signal = problem.scenario.signal;
  const json& cert = config.at("certificate");
  CertifyResult r;
  r.epsilon = get_number(cert, "epsilon", "certificate", 1e-3);
  r.K = get_number(cert, "K", "certificate", 1.0);
  r.persistence_threshold = get_number(cert, "persistence_threshold", "certificate", 1.0);
  const EventSequence events = resolve_events(config, problem);
  try {
    r.certificate = repeated_strong_connectivity(signal, events, r.epsilon);
    r.type_symmetric = type_symmetry_check(signal, events, r.K);
    r.persistent_connected = weakly_connected(persistent_graph(signal, signal.horizon(), r.persistence_threshold));
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("certificate.") + e.what());
  }
  r.M = m_bound(signal, events);
  r.branch_i = r.type_symmetric && r.persistent_connected;
  r.branch_ii = r.certificate.verdict;
  r.quasi = r.certificate.quasi_verdict;
  return r;
}

json certify_to_json(const CertifyResult& r) {
  json doc = io::certificate_to_json(r.certificate, r.K, r.M);
  doc["type_symmetric"] = r.type_symmetric;
  doc["persistence_threshold"] = r.persistence_threshold;
  doc["persistent_graph_connected"] = r.persistent_connected;
  doc["branch_i"] = r.branch_i;
  doc["branch_ii"] = r.branch_ii;
  return doc;
}

std::vector<SweepRow> execute_sweep(const json& config, const std::string& param, const std::vector<std::string>& values,
                                    std::size_t jobs) {
  if (values.empty()) throw ValidationError("sweep: --values must list at least one value");
  if (param.empty()) throw ValidationError("sweep: --param is required");
  // Reject unknown parameters before starting any run.
  {
    const std::size_t dot = param.find('.');
    const std::string section = param.substr(0, dot);
    static const char* known[] = {"scenario", "integration", "diagnostics", "certificate", "signal", "output", "seed"};
    const bool known_section = std::find(std::begin(known), std::end(known), section) != std::end(known);
    if (!known_section || (dot == std::string::npos && section != "seed")) {
      throw ValidationError("sweep: unknown parameter '" + param + "'");
    }
  }
  const bool certificate_only = param.rfind("certificate.", 0) == 0;
  std::vector<json> configs;
  for (const auto& v : values) {
    json c = config;
    apply_override(c, param, v);
    configs.push_back(std::move(c));
  }
  // Validate every configuration up front so bad values surface as exit 2.
  for (const auto& c : configs) resolve_problem(c);

  std::vector<SweepRow> rows(values.size());
  std::vector<std::exception_ptr> errors(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < values.size(); k = next++) {
      try {
        SweepRow row;
        row.value = values[k];
        if (certificate_only) {
          const CertifyResult r = execute_certify(configs[k]);
          row.verdict = std::string("i:") + (r.branch_i ? "pass" : "fail") + " ii:" + (r.branch_ii ? "pass" : "fail");
        } else {
          const RunResult r = execute_run(configs[k]);
          const auto& v = r.report.verdict;
          row.verdict = to_string(v.outcome);
          if (v.outcome == ConsensusOutcome::converged_common_limit) row.c_star = v.c_star;
          row.final_diameter = v.final_diameter;
          row.time_to_tolerance = v.time_to_tolerance;
        }
        rows[k] = std::move(row);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, values.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "value,verdict,c_star,final_diameter,time_to_tolerance\n";
  for (const auto& r : rows) {
    os << r.value << ',' << r.verdict << ',' << csv_number(r.c_star) << ',' << csv_number(r.final_diameter) << ','
       << csv_number(r.time_to_tolerance) << '\n';
  }
  return os.str();
}

}  // namespace lapdde::pipeline
