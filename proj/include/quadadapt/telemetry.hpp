#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "quadadapt/neural.hpp"
#include "quadadapt/types.hpp"

namespace quadadapt {

/// One row of telemetry, sampled at the start of a control step.
struct TelemetryRecord {
  double t = 0.0;
  Vector3 x = Vector3::Zero();
  Vector3 v = Vector3::Zero();
  Matrix3 R = Matrix3::Identity();
  Vector3 Omega = Vector3::Zero();
  Vector3 x_d = Vector3::Zero();
  Vector3 e_x = Vector3::Zero();
  Vector3 e_v = Vector3::Zero();
  Vector3 e_R = Vector3::Zero();
  Vector3 e_Omega = Vector3::Zero();
  double psi = 0.0;
  double thrust = 0.0;
  Vector3 moment = Vector3::Zero();
  Eigen::Vector4d rotor_thrusts = Eigen::Vector4d::Zero();
  Eigen::Vector4d rotor_speeds = Eigen::Vector4d::Zero();
  std::array<bool, 4> saturated{};
  Vector3 delta1_bar = Vector3::Zero();
  Vector3 delta2_bar = Vector3::Zero();
  Vector3 delta1 = Vector3::Zero();  // disturbance acting on the plant
  Vector3 delta2 = Vector3::Zero();
  double W1_norm = 0.0, V1_norm = 0.0, W2_norm = 0.0, V2_norm = 0.0;
  double V1 = 0.0, V2 = 0.0, V = 0.0;
  double weighted_norm = 0.0;
  Vector3 wind = Vector3::Zero();
};

/// Column names in CSV order.
const std::vector<std::string>& csv_columns();

/// Header plus every `decimate`-th record, 17 significant digits.
/// Throws IOError.
void write_csv(const std::vector<TelemetryRecord>& records, const std::string& path,
               int decimate = 1);
void write_csv(const std::vector<TelemetryRecord>& records, std::ostream& os, int decimate = 1);

/// Inverse of write_csv. Throws ParseError on a header or row mismatch.
std::vector<TelemetryRecord> read_csv(std::istream& is);

/// Long-form dump of both networks: net,matrix,row,col,value.
void write_weights(const nn::NNWeights& nn1, const nn::NNWeights& nn2, const std::string& path);
void write_weights(const nn::NNWeights& nn1, const nn::NNWeights& nn2, std::ostream& os);

struct Summary {
  std::size_t records = 0;
  double duration = 0.0;
  double e_x_rms = 0.0, e_x_max = 0.0;
  double e_R_rms = 0.0, e_R_max = 0.0;
  double e_x_rms_tail = 0.0, e_x_max_tail = 0.0;  // last 20 % of the records
  double e_R_rms_tail = 0.0, e_R_max_tail = 0.0;
  double settling_band = 0.05;
  double settling_time = 0.0;   // NaN if ||e_x|| never stays inside the band
  double W1_max = 0.0, V1_max = 0.0, W2_max = 0.0, V2_max = 0.0;
  double final_V = 0.0;
  std::array<std::size_t, 4> saturation_counts{};
  std::size_t saturated_steps = 0;
};

/// Precondition: non-empty. Settling time is the first sample time after
/// which ||e_x|| <= band holds for every later sample.
Summary summarize(const std::vector<TelemetryRecord>& records, double settling_band = 0.05);

void write_summary(std::ostream& os, const Summary& s, const std::string& prefix = "summary.");

}  // namespace quadadapt
