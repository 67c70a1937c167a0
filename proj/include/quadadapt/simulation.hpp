#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "quadadapt/config.hpp"
#include "quadadapt/telemetry.hpp"

namespace quadadapt {

/// Known disturbance networks of the synthetic plant.
struct SyntheticTargets {
  nn::NNWeights net1;  // force disturbance, input [1, x, v]
  nn::NNWeights net2;  // moment disturbance, input [1, Euler angles, Omega]
};

/// Random network with ||V|| = 0.9 V_max and ||W|| = min(0.9 W_max,
/// output_max / sqrt(hidden + 1)), so its output norm never exceeds output_max.
nn::NNWeights random_target_network(int inputs, int hidden, int outputs, double W_max,
                                    double V_max, double output_max, std::mt19937_64& rng);

/// Thrown by Simulation::step; carries the failing step and the module error.
class SimulationAbort : public Error {
 public:
  SimulationAbort(const std::string& what, long step, double t)
      : Error(what), step_(step), t_(t) {}
  long step() const noexcept { return step_; }
  double time() const noexcept { return t_; }

 private:
  long step_;
  double t_;
};

/// Closed loop of trajectory, controller and plant, advanced one shared step
/// at a time. Instances are independent.
class Simulation {
 public:
  explicit Simulation(SimConfig config);

  /// Runs one control update and one plant step; returns the record sampled
  /// at the start of the step. Throws SimulationAbort.
  TelemetryRecord step();

  double time() const { return static_cast<double>(step_index_) * config_.dt; }
  long step_index() const { return step_index_; }
  const RigidBodyState& state() const { return state_; }
  const SimConfig& config() const { return config_; }
  const control::ControllerContext& context() const { return ctx_; }
  const nn::NNWeights& nn1() const { return nn1_; }
  const nn::NNWeights& nn2() const { return nn2_; }
  const std::optional<SyntheticTargets>& targets() const { return targets_; }
  const stability::LyapunovReport& report() const { return report_; }
  /// Diagnostics of the most recent step.
  const control::ControlDiagnostics& diagnostics() const { return last_diag_; }

 private:
  Wrench plant_wrench(double t, const RigidBodyState& s, const control::ControlCommand& cmd,
                      const std::optional<Vector3>& euler_hint) const;
  TelemetryRecord make_record(const control::ControlStepResult& step, const Vector3& x_d,
                              const Vector3& wind, const Wrench& applied) const;

  SimConfig config_;
  control::ControllerContext ctx_;
  control::ControllerMemory memory_;
  nn::NNWeights nn1_, nn2_;
  std::optional<SyntheticTargets> targets_;
  stability::LyapunovReport report_;
  RigidBodyState state_;
  control::ControlDiagnostics last_diag_;
  long step_index_ = 0;
};

struct SimulationResult {
  std::vector<TelemetryRecord> records;  // every step
  nn::NNWeights nn1, nn2;                // final estimates
  stability::LyapunovReport report;
  bool aborted = false;
  std::string abort_reason;
  long abort_step = -1;
  double abort_time = 0.0;
};

/// Runs for config.duration. Module errors end the run early and are
/// recorded with the step index; the records up to that point are kept.
SimulationResult run_simulation(const SimConfig& config);

/// Writes the configured telemetry, weights and summary files.
void write_outputs(const SimConfig& config, const SimulationResult& result);

void write_run_summary(std::ostream& os, const SimConfig& config, const SimulationResult& result);

}  // namespace quadadapt
