#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "quadadapt/aero.hpp"
#include "quadadapt/controller.hpp"
#include "quadadapt/dynamics.hpp"
#include "quadadapt/scenarios.hpp"
#include "quadadapt/stability.hpp"

namespace quadadapt {

enum class PlantMode { Full, Simplified, Synthetic };

PlantMode parse_plant_mode(const std::string& name);
std::string to_string(PlantMode mode);

struct NetworkConfig {
  int hidden = 10;
  double W_max1 = 20.0, V_max1 = 20.0;
  double W_max2 = 20.0, V_max2 = 20.0;
  bool random_init = false;    // otherwise all weights start at zero
  double init_scale = 0.0;     // Frobenius norm of each random initial matrix
};

struct SimConfig {
  QuadParams quad;
  aero::RotorAeroParams aero;
  SimplifiedModelParams simplified;
  bool calibrate_simplified = true;  // derive C_T', C_Q' from the aero hover solution

  control::ControllerGains gains;
  bool adaptation = true;
  NetworkConfig network;
  stability::BoundAssumptions bounds;

  scenarios::TrajectoryGenerator trajectory;
  scenarios::WindField wind;

  PlantMode plant = PlantMode::Simplified;
  Vector3 delta_force = Vector3::Zero();    // simplified plant
  Vector3 delta_moment = Vector3::Zero();   // simplified plant
  double synthetic_delta1_max = 2.0;        // N, synthetic plant
  double synthetic_delta2_max = 0.1;        // N m, synthetic plant

  double dt = 1e-3;
  double duration = 10.0;
  std::uint64_t seed = 1;
  int decimate = 1;
  Vector3 position_offset = Vector3::Zero();   // x(0) - x_d(0)
  Vector3 velocity_offset = Vector3::Zero();   // v(0) - v_d(0)
  Vector3 attitude_offset = Vector3::Zero();   // rotation vector applied to the initial attitude
  Vector3 initial_omega = Vector3::Zero();      // added to the heading rate of the trajectory
  bool align_attitude = false;  // start at the first commanded attitude instead of level

  std::string telemetry_path;
  std::string weights_path;
  std::string summary_path;

  /// Throws ValidationError naming the violated invariant.
  void validate() const;
};

/// Raw `key = value` entries grouped by section, with their line numbers.
struct IniEntry {
  std::string value;
  int line = 0;
};
using IniDocument = std::map<std::string, std::map<std::string, IniEntry>>;

/// Parses `[section]` headers and `key = value` lines; `#` and `;` start
/// comments. Throws ParseError on malformed lines or duplicate keys.
IniDocument parse_ini(std::istream& in);

/// Overlays the document on a default SimConfig. Unknown sections or keys and
/// unparsable values throw ParseError; the result is validated.
SimConfig config_from_ini(const IniDocument& doc);

/// Reads and parses a config file. Throws IOError, ParseError, ValidationError.
SimConfig load_config(const std::string& path);

/// Applies a single `section.key=value` override, as used by the CLI.
void apply_override(SimConfig& config, const std::string& assignment);

/// Every accepted `section.key`, in schema order.
std::vector<std::string> config_keys();

}  // namespace quadadapt
