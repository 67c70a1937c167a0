#include "quadadapt/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "quadadapt/errors.hpp"

namespace quadadapt {

PlantMode parse_plant_mode(const std::string& s) {
  if (s == "full") return PlantMode::Full;
  if (s == "simplified") return PlantMode::Simplified;
  if (s == "synthetic") return PlantMode::Synthetic;
  throw ValidationError("unknown plant mode '" + s + "'");
}

std::string to_string(PlantMode m) {
  switch (m) {
    case PlantMode::Full: return "full";
    case PlantMode::Simplified: return "simplified";
    case PlantMode::Synthetic: return "synthetic";
  }
  return "?";
}

void SimConfig::validate() const {
  quad.validate();
  aero.validate();
  if (!calibrate_simplified) simplified.validate();
  gains.validate();
  bounds.validate();
  trajectory.validate();
  wind.validate();
  if (network.hidden < 1) throw ValidationError("network.hidden must be >= 1");
  for (double b : {network.W_max1, network.V_max1, network.W_max2, network.V_max2}) {
    if (!(b >= 0.0)) throw ValidationError("network weight bounds must be >= 0");
  }
  if (!(network.init_scale >= 0.0)) throw ValidationError("network.init_scale must be >= 0");
  if (!(dt > 0.0 && dt <= 0.05)) {
    throw ValidationError("sim.dt = " + std::to_string(dt) + " violates 0 < dt <= 0.05");
  }
  if (!(duration > 0.0)) throw ValidationError("sim.duration must be > 0");
  if (decimate < 1) throw ValidationError("sim.decimate must be >= 1");
  if (!(synthetic_delta1_max >= 0.0) || !(synthetic_delta2_max >= 0.0)) {
    throw ValidationError("synthetic disturbance maxima must be >= 0");
  }
  for (const Vector3* v : {&delta_force, &delta_moment, &position_offset, &velocity_offset,
                           &attitude_offset, &initial_omega}) {
    if (!v->allFinite()) throw ValidationError("initial offsets and disturbances must be finite");
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Value parsers throw std::invalid_argument; the caller attaches line and key.
double to_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("trailing characters");
  return v;
}

long long to_integer(const std::string& s) {
  std::size_t used = 0;
  const long long v = std::stoll(s, &used);
  if (used != s.size()) throw std::invalid_argument("trailing characters");
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "on" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "off" || s == "no" || s == "0") return false;
  throw std::invalid_argument("expected a boolean");
}

std::vector<double> to_list(const std::string& s) {
  std::string text = s;
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream in(text);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(to_double(tok));
  return out;
}

Vector3 to_vec3(const std::string& s) {
  const auto v = to_list(s);
  if (v.size() != 3) throw std::invalid_argument("expected 3 numbers");
  return {v[0], v[1], v[2]};
}

Matrix3 to_inertia(const std::string& s) {
  const auto v = to_list(s);
  if (v.size() == 3) return Vector3(v[0], v[1], v[2]).asDiagonal();
  if (v.size() == 9) return Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(v.data());
  throw std::invalid_argument("expected 3 diagonal or 9 row-major entries");
}

using Setter = std::function<void(SimConfig&, const std::string&)>;

struct Field {
  const char* section;
  const char* key;
  Setter set;
};

#define NUM(sec, k, member) {sec, k, [](SimConfig& c, const std::string& v) { c.member = to_double(v); }}
#define VEC(sec, k, member) {sec, k, [](SimConfig& c, const std::string& v) { c.member = to_vec3(v); }}

const std::vector<Field>& schema() {
  static const std::vector<Field> fields = {
      NUM("quad", "mass", quad.mass),
      {"quad", "inertia", [](SimConfig& c, const std::string& v) { c.quad.inertia = to_inertia(v); }},
      NUM("quad", "arm_length", quad.arm_length),
      NUM("quad", "rotor_height", quad.rotor_height),
      NUM("quad", "gravity", quad.gravity),

      NUM("aero", "air_density", aero.air_density),
      NUM("aero", "rotor_radius", aero.rotor_radius),
      {"aero", "blade_count",
       [](SimConfig& c, const std::string& v) { c.aero.blade_count = static_cast<int>(to_integer(v)); }},
      NUM("aero", "chord", aero.chord),
      NUM("aero", "lift_slope", aero.lift_slope),
      NUM("aero", "blade_pitch", aero.blade_pitch),
      NUM("aero", "profile_drag", aero.profile_drag),
      NUM("aero", "flap_coeff", aero.flap_coeff),
      NUM("aero", "blade_stiffness", aero.blade_stiffness),
      NUM("aero", "body_drag", aero.body_drag),
      NUM("aero", "omega_min", aero.omega_min),

      {"simplified", "calibrate",
       [](SimConfig& c, const std::string& v) { c.calibrate_simplified = to_bool(v); }},
      NUM("simplified", "thrust_coeff", simplified.thrust_coeff),
      NUM("simplified", "torque_coeff", simplified.torque_coeff),

      NUM("gains", "k_x", gains.k_x),
      NUM("gains", "k_v", gains.k_v),
      NUM("gains", "k_R", gains.k_R),
      NUM("gains", "k_Omega", gains.k_Omega),
      NUM("gains", "c1", gains.c1),
      NUM("gains", "c2", gains.c2),

      {"adaptation", "enabled", [](SimConfig& c, const std::string& v) { c.adaptation = to_bool(v); }},
      NUM("adaptation", "gamma_w1", gains.position.gamma_w),
      NUM("adaptation", "gamma_v1", gains.position.gamma_v),
      NUM("adaptation", "kappa1", gains.position.kappa),
      NUM("adaptation", "gamma_w2", gains.attitude.gamma_w),
      NUM("adaptation", "gamma_v2", gains.attitude.gamma_v),
      NUM("adaptation", "kappa2", gains.attitude.kappa),

      {"network", "hidden",
       [](SimConfig& c, const std::string& v) { c.network.hidden = static_cast<int>(to_integer(v)); }},
      NUM("network", "W_max1", network.W_max1),
      NUM("network", "V_max1", network.V_max1),
      NUM("network", "W_max2", network.W_max2),
      NUM("network", "V_max2", network.V_max2),
      {"network", "init",
       [](SimConfig& c, const std::string& v) {
         if (v == "zero") c.network.random_init = false;
         else if (v == "random") c.network.random_init = true;
         else throw std::invalid_argument("expected zero or random");
       }},
      NUM("network", "init_scale", network.init_scale),

      NUM("bounds", "psi1", bounds.psi1),
      NUM("bounds", "B1", bounds.B1),
      NUM("bounds", "B2", bounds.B2),
      NUM("bounds", "B4", bounds.B4),
      NUM("bounds", "e_x_max", bounds.e_x_max),
      NUM("bounds", "x_d_max", bounds.x_d_max),
      NUM("bounds", "v_d_max", bounds.v_d_max),
      NUM("bounds", "E_max", bounds.E_max),
      NUM("bounds", "delta1", bounds.delta1),
      NUM("bounds", "delta2", bounds.delta2),
      NUM("bounds", "delta3", bounds.delta3),
      NUM("bounds", "delta4", bounds.delta4),
      NUM("bounds", "eps1", bounds.eps1),
      NUM("bounds", "eps2", bounds.eps2),

      {"trajectory", "kind",
       [](SimConfig& c, const std::string& v) { c.trajectory.kind = scenarios::parse_trajectory_kind(v); }},
      VEC("trajectory", "center", trajectory.center),
      NUM("trajectory", "radius", trajectory.radius),
      NUM("trajectory", "rate", trajectory.rate),
      NUM("trajectory", "climb_rate", trajectory.climb_rate),
      VEC("trajectory", "amplitude", trajectory.amplitude),
      VEC("trajectory", "frequency", trajectory.frequency),
      VEC("trajectory", "phase", trajectory.phase),

      {"wind", "kind",
       [](SimConfig& c, const std::string& v) { c.wind.kind = scenarios::parse_wind_kind(v); }},
      VEC("wind", "base", wind.base),
      NUM("wind", "amplitude", wind.amplitude),
      NUM("wind", "onset", wind.onset),
      NUM("wind", "frequency", wind.frequency),
      VEC("wind", "direction", wind.direction),

      {"plant", "mode", [](SimConfig& c, const std::string& v) { c.plant = parse_plant_mode(v); }},
      VEC("plant", "delta_force", delta_force),
      VEC("plant", "delta_moment", delta_moment),
      NUM("plant", "synthetic_delta1_max", synthetic_delta1_max),
      NUM("plant", "synthetic_delta2_max", synthetic_delta2_max),

      NUM("sim", "dt", dt),
      NUM("sim", "duration", duration),
      {"sim", "seed",
       [](SimConfig& c, const std::string& v) {
         const long long s = to_integer(v);
         if (s < 0) throw std::invalid_argument("seed must be >= 0");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"sim", "decimate",
       [](SimConfig& c, const std::string& v) { c.decimate = static_cast<int>(to_integer(v)); }},
      VEC("sim", "position_offset", position_offset),
      VEC("sim", "velocity_offset", velocity_offset),
      VEC("sim", "attitude_offset", attitude_offset),
      VEC("sim", "initial_omega", initial_omega),
      {"sim", "align_attitude",
       [](SimConfig& c, const std::string& v) { c.align_attitude = to_bool(v); }},

      {"output", "telemetry", [](SimConfig& c, const std::string& v) { c.telemetry_path = v; }},
      {"output", "weights", [](SimConfig& c, const std::string& v) { c.weights_path = v; }},
      {"output", "summary", [](SimConfig& c, const std::string& v) { c.summary_path = v; }},
  };
  return fields;
}

#undef NUM
#undef VEC

const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : schema()) {
    if (section == f.section && key == f.key) return &f;
  }
  return nullptr;
}

void set_value(SimConfig& c, const std::string& section, const std::string& key,
               const std::string& value, int line) {
  const Field* f = find_field(section, key);
  const std::string full = section + "." + key;
  if (!f) throw ParseError("unknown key '" + full + "' at line " + std::to_string(line), line, key);
  try {
    f->set(c, value);
  } catch (const ValidationError& e) {
    throw ParseError(full + " at line " + std::to_string(line) + ": " + e.what(), line, key);
  } catch (const std::logic_error& e) {
    throw ParseError("bad value '" + value + "' for " + full + " at line " +
                         std::to_string(line) + ": " + e.what(),
                     line, key);
  }
}

}  // namespace

IniDocument parse_ini(std::istream& in) {
  IniDocument doc;
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header at line " +
                                                   std::to_string(line_no), line_no, line);
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ParseError("empty section name at line " +
                                                std::to_string(line_no), line_no, "");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected 'key = value' at line " + std::to_string(line_no), line_no, line);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("missing key at line " + std::to_string(line_no), line_no, "");
    if (section.empty()) {
      throw ParseError("key '" + key + "' outside any section at line " + std::to_string(line_no),
                       line_no, key);
    }
    auto& entries = doc[section];
    if (entries.count(key)) {
      throw ParseError("duplicate key '" + section + "." + key + "' at line " +
                           std::to_string(line_no),
                       line_no, key);
    }
    entries[key] = {value, line_no};
  }
  return doc;
}

SimConfig config_from_ini(const IniDocument& doc) {
  SimConfig c;
  for (const auto& [section, entries] : doc) {
    for (const auto& [key, entry] : entries) set_value(c, section, key, entry.value, entry.line);
  }
  c.validate();
  return c;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open config file '" + path + "'");
  return config_from_ini(parse_ini(in));
}

void apply_override(SimConfig& c, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ParseError("override must look like section.key=value: '" + assignment + "'", 0,
                     assignment);
  }
  set_value(c, trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)),
            trim(assignment.substr(eq + 1)), 0);
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& f : schema()) out.push_back(std::string(f.section) + "." + f.key);
  return out;
}

}  // namespace quadadapt
