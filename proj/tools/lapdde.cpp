#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lapdde/error.hpp"
#include "lapdde/io.hpp"
#include "lapdde/pipeline.hpp"

namespace {

namespace pl = lapdde::pipeline;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kNoBranch = 1;
constexpr int kValidation = 2;
constexpr int kRuntime = 3;

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> sets;
  std::string output;
};

json base_config(const CommonOptions& o) {
  return o.config_path.empty() ? pl::default_config() : pl::load_config(o.config_path);
}

void apply_sets(json& cfg, const std::vector<std::string>& sets) {
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw lapdde::ValidationError("--set: expected key=value, got '" + s + "'");
    pl::apply_override(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
}

template <typename T>
void set_if(json& cfg, const std::string& key, const std::optional<T>& v) {
  if (v) pl::apply_override(cfg, key, json(*v).dump());
}

std::size_t default_jobs() {
  if (const char* env = std::getenv("LAPDDE_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    throw lapdde::ValidationError("LAPDDE_JOBS: expected a positive integer, got '" + std::string(env) + "'");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::string> split_values(const std::string& list) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    std::string item = list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const lapdde::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const json::exception& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lapdde: delayed averaging consensus simulator and certificate checker"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  std::optional<std::string> scenario;
  std::optional<long long> n;
  std::optional<double> delay, weight, t_end, step;
  auto* run = app.add_subcommand("run", "integrate a scenario and write trajectory, diagnostics and certificate");
  run->add_option("config", run_opts.config_path, "JSON config file");
  run->add_option("--scenario", scenario, "scenario name (scenario.name)");
  run->add_option("--n", n, "agent count (scenario.n)");
  run->add_option("--delay", delay, "uniform delay (scenario.delay)");
  run->add_option("--weight", weight, "arc weight (scenario.weight)");
  run->add_option("--t-end", t_end, "final time (integration.t_end)");
  run->add_option("--step", step, "step size (integration.step)");
  run->add_option("--set", run_opts.sets, "override a dotted config key, key=value");
  run->add_option("-o,--output", run_opts.output, "output directory")->default_val("out");

  CommonOptions cert_opts;
  std::optional<double> epsilon, K;
  std::optional<std::string> events;
  std::optional<std::string> cert_scenario;
  auto* certify = app.add_subcommand("certify", "check the connectivity and symmetry conditions for consensus");
  certify->add_option("config", cert_opts.config_path, "JSON config file");
  certify->add_option("--scenario", cert_scenario, "scenario name (scenario.name)");
  certify->add_option("--epsilon", epsilon, "interval integral threshold (certificate.epsilon)");
  certify->add_option("--K", K, "type-symmetry constant (certificate.K)");
  certify->add_option("--events", events,
                      "event times: comma list, 'scenario' or 'uniform:<period>' (certificate.events)");
  certify->add_option("--set", cert_opts.sets, "override a dotted config key, key=value");
  certify->add_option("-o,--output", cert_opts.output, "write certificate.json here");

  CommonOptions sweep_opts;
  std::string param;
  std::optional<std::string> values;
  std::optional<std::size_t> jobs;
  auto* sweep = app.add_subcommand("sweep", "run once per parameter value and summarize");
  sweep->add_option("config", sweep_opts.config_path, "JSON config file");
  sweep->add_option("--param", param, "dotted config key to vary")->required();
  sweep->add_option("--values", values, "comma-separated values")->required();
  sweep->add_option("--jobs", jobs, "parallel runs (default LAPDDE_JOBS or core count)");
  sweep->add_option("--set", sweep_opts.sets, "override a dotted config key, key=value");
  sweep->add_option("-o,--output", sweep_opts.output, "output directory")->default_val("out");

  auto* scen = app.add_subcommand("scenarios", "scenario generators");
  scen->require_subcommand(1);
  auto* scen_list = scen->add_subcommand("list", "list generators and their parameters");
  std::string emit_name;
  std::vector<std::string> emit_sets;
  auto* scen_emit = scen->add_subcommand("emit", "print the signal JSON of a generator");
  scen_emit->add_option("name", emit_name, "scenario name")->required();
  scen_emit->add_option("--set", emit_sets, "generator parameter, key=value (scenario.key)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  if (*run) {
    return guarded([&] {
      json cfg = base_config(run_opts);
      if (scenario) pl::apply_override(cfg, "scenario.name", json(*scenario).dump());
      set_if(cfg, "scenario.n", n);
      set_if(cfg, "scenario.delay", delay);
      set_if(cfg, "scenario.weight", weight);
      set_if(cfg, "integration.t_end", t_end);
      set_if(cfg, "integration.step", step);
      apply_sets(cfg, run_opts.sets);
      const pl::RunResult result = pl::execute_run(cfg);
      pl::write_run_outputs(result, cfg, run_opts.output);
      std::cout << pl::verdict_summary(result) << "\n";
      return kOk;
    });
  }

  if (*certify) {
    return guarded([&] {
      json cfg = base_config(cert_opts);
      if (cert_scenario) pl::apply_override(cfg, "scenario.name", json(*cert_scenario).dump());
      set_if(cfg, "certificate.epsilon", epsilon);
      set_if(cfg, "certificate.K", K);
      if (events) {
        if (*events == "scenario" || events->rfind("uniform:", 0) == 0) {
          cfg["certificate"]["events"] = *events;
        } else {
          json times = json::array();
          for (const auto& v : split_values(*events)) {
            try {
              times.push_back(std::stod(v));
            } catch (const std::exception&) {
              throw lapdde::ValidationError("--events: not a number: '" + v + "'");
            }
          }
          cfg["certificate"]["events"] = times;
        }
      }
      apply_sets(cfg, cert_opts.sets);
      const pl::CertifyResult r = pl::execute_certify(cfg);
      std::printf("branch i  (type-symmetric K=%g, persistent graph connected): %s\n", r.K,
                  r.branch_i ? "pass" : "fail");
      std::printf("  type symmetry: %s, persistent graph (threshold %g): %s\n", r.type_symmetric ? "pass" : "fail",
                  r.persistence_threshold, r.persistent_connected ? "connected" : "disconnected");
      std::printf("branch ii (repeated strong connectivity, epsilon=%g, %zu intervals): %s\n", r.epsilon,
                  r.certificate.intervals.size(), r.branch_ii ? "pass" : "fail");
      std::printf("quasi-strong connectivity on every interval: %s\n", r.quasi ? "yes" : "no");
      std::printf("M = %.17g\n", r.M);
      if (!cert_opts.output.empty()) {
        std::filesystem::create_directories(cert_opts.output);
        lapdde::io::write_file_atomic(std::filesystem::path(cert_opts.output) / "certificate.json",
                                      pl::certify_to_json(r).dump(1) + "\n");
      }
      return r.branch_i || r.branch_ii ? kOk : kNoBranch;
    });
  }

  if (*sweep) {
    return guarded([&] {
      json cfg = base_config(sweep_opts);
      apply_sets(cfg, sweep_opts.sets);
      const auto vals = split_values(*values);
      const std::size_t j = jobs ? *jobs : default_jobs();
      if (j == 0) throw lapdde::ValidationError("--jobs: must be positive");
      const auto rows = pl::execute_sweep(cfg, param, vals, j);
      std::filesystem::create_directories(sweep_opts.output);
      const std::string csv = pl::sweep_csv(rows);
      lapdde::io::write_file_atomic(std::filesystem::path(sweep_opts.output) / "sweep.csv", csv);
      std::cout << csv;
      return kOk;
    });
  }

  if (*scen_list) {
    for (const auto& s : pl::scenario_catalog()) {
      std::cout << s.name << "\n  " << s.summary << "\n  parameters: " << s.parameters << "\n";
    }
    return kOk;
  }

  if (*scen_emit) {
    return guarded([&] {
      json cfg = pl::default_config();
      cfg["scenario"]["name"] = emit_name;
      for (const auto& s : emit_sets) apply_sets(cfg, {"scenario." + s});
      const auto problem = pl::resolve_problem(cfg);
      const auto& ev = problem.scenario.events;
      std::cout << lapdde::io::signal_to_json(problem.scenario.signal, ev ? &*ev : nullptr).dump(1) << "\n";
      return kOk;
    });
  }
  return kValidation;
}
