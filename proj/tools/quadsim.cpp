// quadsim: run closed-loop simulations, check gain sets, sweep a parameter.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime abort.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "quadadapt/config.hpp"
#include "quadadapt/errors.hpp"
#include "quadadapt/simulation.hpp"

namespace fs = std::filesystem;
using namespace quadadapt;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitAbort = 3;

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
};

SimConfig load(const CommonOptions& o) {
  SimConfig c = o.config_path.empty() ? SimConfig{} : load_config(o.config_path);
  for (const auto& a : o.overrides) apply_override(c, a);
  c.validate();
  return c;
}

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("-c,--config", o.config_path, "Configuration file")->check(CLI::ExistingFile);
  app->add_option("--set", o.overrides, "Override a key, e.g. --set gains.k_x=12");
}

Vector3 parse_vec3(const std::string& s) {
  SimConfig tmp;
  apply_override(tmp, "wind.base=" + s);
  return tmp.wind.base;
}

stability::LyapunovReport gain_report(const SimConfig& c) {
  SimConfig tmp = c;
  tmp.bounds.W_M1 = c.network.W_max1;
  tmp.bounds.V_M1 = c.network.V_max1;
  tmp.bounds.W_M2 = c.network.W_max2;
  tmp.bounds.V_M2 = c.network.V_max2;
  return stability::build_pd_matrices(tmp.gains, tmp.quad.mass, tmp.quad.inertia, tmp.bounds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop quadrotor simulator with adaptive geometric control"};
  app.require_subcommand(1);

  // run
  CommonOptions run_opts;
  std::string out_dir;
  std::optional<double> duration, dt;
  std::optional<std::string> wind, adaptation, plant;
  std::optional<std::uint64_t> seed;
  std::optional<int> decimate;
  bool strict = false;
  CLI::App* run = app.add_subcommand("run", "Run one simulation");
  add_common(run, run_opts);
  run->add_option("-o,--out", out_dir, "Directory for telemetry.csv, weights.csv, summary.txt");
  run->add_option("--duration", duration, "Simulated time, s");
  run->add_option("--dt", dt, "Step size, s");
  run->add_option("--wind", wind, "Constant wind velocity 'x,y,z' in m/s");
  run->add_option("--adaptation", adaptation, "on|off")->check(CLI::IsMember({"on", "off"}));
  run->add_option("--plant", plant, "full|simplified|synthetic")
      ->check(CLI::IsMember({"full", "simplified", "synthetic"}));
  run->add_option("--seed", seed, "RNG seed");
  run->add_option("--decimate", decimate, "Keep every Nth telemetry record");
  run->add_flag("--strict", strict, "Refuse to run when the gain checks fail");

  // validate-gains
  CommonOptions val_opts;
  bool val_strict = false;
  CLI::App* val = app.add_subcommand("validate-gains", "Print the gain and Lyapunov report");
  add_common(val, val_opts);
  val->add_flag("--strict", val_strict, "Exit with status 2 when any check fails");

  // sweep
  CommonOptions sweep_opts;
  std::string sweep_param;
  std::vector<double> sweep_values;
  std::string sweep_out;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  CLI::App* sweep = app.add_subcommand("sweep", "Grid over one parameter, one summary row per run");
  add_common(sweep, sweep_opts);
  sweep->add_option("-p,--param", sweep_param, "section.key to vary")->required();
  sweep->add_option("-v,--values", sweep_values, "Values to try")->required()->delimiter(',');
  sweep->add_option("-o,--out", sweep_out, "Directory for per-run outputs and sweep.csv");
  sweep->add_option("-j,--jobs", jobs, "Parallel workers")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  SimConfig config;
  try {
    if (*run) {
      config = load(run_opts);
      if (duration) config.duration = *duration;
      if (dt) config.dt = *dt;
      if (wind) {
        config.wind.kind = scenarios::WindKind::Constant;
        config.wind.base = parse_vec3(*wind);
      }
      if (adaptation) config.adaptation = *adaptation == "on";
      if (plant) config.plant = parse_plant_mode(*plant);
      if (seed) config.seed = *seed;
      if (decimate) config.decimate = *decimate;
      if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        config.telemetry_path = (fs::path(out_dir) / "telemetry.csv").string();
        config.weights_path = (fs::path(out_dir) / "weights.csv").string();
        config.summary_path = (fs::path(out_dir) / "summary.txt").string();
      }
      config.validate();
    } else if (*val) {
      config = load(val_opts);
    } else {
      config = load(sweep_opts);
      apply_override(config, sweep_param + "=0");  // rejects unknown keys up front
    }
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  if (*val) {
    const auto report = gain_report(config);
    stability::write_report(std::cout, report);
    return (val_strict && !report.all_pass) ? kExitConfig : 0;
  }

  if (*run) {
    const auto report = gain_report(config);
    if (!report.all_pass) {
      std::cerr << "warning: gain conditions not satisfied (see validate-gains)\n";
      if (strict) return kExitConfig;
    }
    SimulationResult result;
    try {
      result = run_simulation(config);
      write_outputs(config, result);
    } catch (const ValidationError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return kExitConfig;
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitAbort;
    }
    write_run_summary(std::cout, config, result);
    if (result.aborted) {
      std::cerr << "aborted: " << result.abort_reason << '\n';
      return kExitAbort;
    }
    return 0;
  }

  // sweep
  if (!sweep_out.empty()) fs::create_directories(sweep_out);
  std::vector<std::string> rows(sweep_values.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> any_abort{false}, any_config_error{false};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < sweep_values.size(); i = next++) {
      std::ostringstream row;
      row.precision(12);
      row << sweep_values[i];
      try {
        SimConfig c = config;
        std::ostringstream value;
        value.precision(17);
        value << sweep_values[i];
        apply_override(c, sweep_param + "=" + value.str());
        c.telemetry_path.clear();
        c.weights_path.clear();
        c.summary_path.clear();
        if (!sweep_out.empty()) {
          const fs::path dir = fs::path(sweep_out) / ("run_" + std::to_string(i));
          fs::create_directories(dir);
          c.telemetry_path = (dir / "telemetry.csv").string();
          c.summary_path = (dir / "summary.txt").string();
        }
        c.validate();
        const SimulationResult r = run_simulation(c);
        write_outputs(c, r);
        const Summary s = summarize(r.records);
        row << ',' << (r.aborted ? 1 : 0) << ',' << s.e_x_rms << ',' << s.e_x_max << ','
            << s.e_x_rms_tail << ',' << s.e_R_rms << ',' << s.e_R_max << ',' << s.settling_time
            << ',' << s.W1_max << ',' << s.W2_max << ',' << s.final_V << ','
            << s.saturated_steps;
        if (r.aborted) any_abort = true;
      } catch (const Error& e) {
        any_config_error = true;
        std::lock_guard lock(log_mutex);
        std::cerr << "run " << i << ": " << e.what() << '\n';
        row << ",2,,,,,,,,,,";
      }
      rows[i] = row.str();
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = std::min<unsigned>(jobs, static_cast<unsigned>(sweep_values.size()));
  for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::ostringstream table;
  table << sweep_param
        << ",aborted,e_x_rms,e_x_max,e_x_rms_tail,e_R_rms,e_R_max,settling_time,W1_max,W2_max,"
           "final_V,saturated_steps\n";
  for (const auto& r : rows) table << r << '\n';
  std::cout << table.str();
  if (!sweep_out.empty()) {
    std::ofstream os(fs::path(sweep_out) / "sweep.csv");
    os << table.str();
  }
  if (any_config_error) return kExitConfig;
  return any_abort ? kExitAbort : 0;
}
