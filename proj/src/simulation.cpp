#include "quadadapt/simulation.hpp"

#include <cmath>
#include <fstream>

#include "quadadapt/aero.hpp"
#include "quadadapt/errors.hpp"

namespace quadadapt {

namespace {

MatrixX gaussian(Eigen::Index rows, Eigen::Index cols, double norm, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  MatrixX M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = n01(rng);
  }
  const double current = M.norm();
  if (current > 0.0) M *= norm / current;
  return nn::project_to_ball(M, norm);
}

void require_finite(const Eigen::Ref<const MatrixX>& m, const char* name) {
  if (!m.allFinite()) throw NonFiniteState(std::string("non-finite ") + name);
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw NonFiniteState(std::string("non-finite ") + name);
}

}  // namespace

nn::NNWeights random_target_network(int inputs, int hidden, int outputs, double W_max,
                                    double V_max, double output_max, std::mt19937_64& rng) {
  nn::NNWeights w = nn::NNWeights::zeros(inputs, hidden, outputs, W_max, V_max);
  w.V = gaussian(w.V.rows(), w.V.cols(), 0.9 * V_max, rng);
  const double w_norm = std::min(0.9 * W_max, output_max / std::sqrt(hidden + 1.0));
  w.W = gaussian(w.W.rows(), w.W.cols(), w_norm, rng);
  return w;
}

Simulation::Simulation(SimConfig config) : config_(std::move(config)) {
  config_.validate();
  if (config_.calibrate_simplified) config_.simplified = aero::calibrate_simplified(config_.aero);
  config_.simplified.validate();
  config_.bounds.W_M1 = config_.network.W_max1;
  config_.bounds.V_M1 = config_.network.V_max1;
  config_.bounds.W_M2 = config_.network.W_max2;
  config_.bounds.V_M2 = config_.network.V_max2;

  ctx_.gains = config_.gains;
  ctx_.quad = config_.quad;
  ctx_.simplified = config_.simplified;
  ctx_.adaptation = config_.adaptation;
  ctx_.omega_min = config_.aero.omega_min;

  const NetworkConfig& net = config_.network;
  std::mt19937_64 rng(config_.seed);
  nn1_ = nn::NNWeights::zeros(6, net.hidden, 3, net.W_max1, net.V_max1);
  nn2_ = nn::NNWeights::zeros(6, net.hidden, 3, net.W_max2, net.V_max2);
  if (net.random_init) {
    for (nn::NNWeights* w : {&nn1_, &nn2_}) {
      w->W = gaussian(w->W.rows(), w->W.cols(), std::min(net.init_scale, w->W_max), rng);
      w->V = gaussian(w->V.rows(), w->V.cols(), std::min(net.init_scale, w->V_max), rng);
    }
  }
  if (config_.plant == PlantMode::Synthetic) {
    SyntheticTargets t;
    t.net1 = random_target_network(6, net.hidden, 3, net.W_max1, net.V_max1,
                                   config_.synthetic_delta1_max, rng);
    t.net2 = random_target_network(6, net.hidden, 3, net.W_max2, net.V_max2,
                                   config_.synthetic_delta2_max, rng);
    targets_ = std::move(t);
  }

  report_ = stability::build_pd_matrices(config_.gains, config_.quad.mass, config_.quad.inertia,
                                         config_.bounds);

  const control::TrajectoryPoint p0 = scenarios::trajectory_at(config_.trajectory, 0.0);
  state_.x = p0.x + config_.position_offset;
  state_.v = p0.v + config_.velocity_offset;
  Vector3 heading(p0.b1d.x(), p0.b1d.y(), 0.0);
  if (heading.norm() < 1e-9) heading = Vector3::UnitX();
  heading.normalize();
  Matrix3 yaw;
  yaw << heading, Vector3::UnitZ().cross(heading), Vector3::UnitZ();
  if (config_.align_attitude) {
    const Vector3 delta1_bar = config_.adaptation
                                   ? nn::nn_output(nn1_, nn::build_position_input(state_.x, state_.v))
                                   : Vector3::Zero();
    const Vector3 A = control::compute_A(config_.position_offset, config_.velocity_offset,
                                         delta1_bar, p0.a, config_.gains, config_.quad.mass,
                                         config_.quad.gravity);
    const double eps_A = ctx_.eps_A_fraction * config_.quad.mass * config_.quad.gravity;
    yaw = control::compute_Rc(A, p0.b1d, eps_A);
  }
  state_.R = se3::exp_so3(config_.attitude_offset) * yaw;
  // Start turning with the heading so that yaw tracking begins without a rate error.
  const double heading_rate = p0.b1d.cross(p0.b1d_dot).z();
  state_.Omega = config_.initial_omega + Vector3(0.0, 0.0, heading_rate);
}

Wrench Simulation::plant_wrench(double t, const RigidBodyState& s,
                                const control::ControlCommand& cmd,
                                const std::optional<Vector3>& euler_hint) const {
  switch (config_.plant) {
    case PlantMode::Full: {
      const Vector3 wind = scenarios::wind_at(config_.wind, t);
      const auto w = aero::resultant_wrench(s, wind, cmd.rotor_speeds, config_.quad, config_.aero);
      return {w.force, w.moment};
    }
    case PlantMode::Simplified:
      return simplified_wrench(s, cmd.thrust, cmd.moment, config_.quad, config_.delta_force,
                               config_.delta_moment);
    case PlantMode::Synthetic: {
      const Vector3 d1 = nn::nn_output(targets_->net1, nn::build_position_input(s.x, s.v));
      const Vector3 d2 =
          nn::nn_output(targets_->net2, nn::build_attitude_input(s.R, s.Omega, euler_hint));
      return simplified_wrench(s, cmd.thrust, cmd.moment, config_.quad, d1, d2);
    }
  }
  return {};
}

TelemetryRecord Simulation::make_record(const control::ControlStepResult& res,
                                        const Vector3& x_d, const Vector3& wind,
                                        const Wrench& applied) const {
  const control::ControlDiagnostics& d = res.diagnostics;
  const control::ControlCommand& c = res.command;
  TelemetryRecord r;
  r.t = time();
  r.x = state_.x;
  r.v = state_.v;
  r.R = state_.R;
  r.Omega = state_.Omega;
  r.x_d = x_d;
  r.e_x = d.e_x;
  r.e_v = d.e_v;
  r.e_R = d.attitude.e_R;
  r.e_Omega = d.attitude.e_Omega;
  r.psi = d.attitude.psi;
  r.thrust = c.thrust;
  r.moment = c.moment;
  r.rotor_thrusts = c.rotor_thrusts;
  r.rotor_speeds = c.rotor_speeds;
  r.saturated = c.saturated;
  r.delta1_bar = d.delta1_bar;
  r.delta2_bar = d.delta2_bar;

  // The disturbance is whatever separates the plant from the simplified model
  // driven by the commanded thrust and moment.
  const QuadParams& q = config_.quad;
  const Wrench nominal =
      simplified_wrench(state_, c.thrust, c.moment, q, Vector3::Zero(), Vector3::Zero());
  r.delta1 = nominal.force - applied.force;
  r.delta2 = nominal.moment - applied.moment;

  r.W1_norm = nn1_.W.norm();
  r.V1_norm = nn1_.V.norm();
  r.W2_norm = nn2_.W.norm();
  r.V2_norm = nn2_.V.norm();

  stability::ErrorState e{d.e_x, d.e_v, d.attitude.e_R, d.attitude.e_Omega, d.attitude.psi};
  std::optional<stability::WeightErrors> nn_err;
  const auto& g = config_.gains;
  if (targets_ && g.position.gamma_w > 0 && g.position.gamma_v > 0 && g.attitude.gamma_w > 0 &&
      g.attitude.gamma_v > 0) {
    nn_err = stability::WeightErrors{targets_->net1.W - nn1_.W, targets_->net1.V - nn1_.V,
                                     targets_->net2.W - nn2_.W, targets_->net2.V - nn2_.V};
  }
  const auto V = stability::lyapunov_value(e, g, q.mass, q.inertia, nn_err);
  r.V1 = V.V1;
  r.V2 = V.V2;
  r.V = V.V;
  r.weighted_norm = stability::weighted_error_norm(e, g, nn_err);
  r.wind = wind;
  return r;
}

TelemetryRecord Simulation::step() {
  const double t = time();
  const double dt = config_.dt;
  try {
    const control::TrajectoryPoint traj = scenarios::trajectory_at(config_.trajectory, t);
    const Vector3 wind = config_.plant == PlantMode::Full ? scenarios::wind_at(config_.wind, t)
                                                          : Vector3::Zero();
    const control::ControlStepResult res =
        control::control_step(state_, traj, nn1_, nn2_, ctx_, memory_, dt);
    const std::optional<Vector3> hint = memory_.last_euler;
    const control::ControlCommand& cmd = res.command;

    const Wrench applied = plant_wrench(t, state_, cmd, hint);
    TelemetryRecord record = make_record(res, traj.x, wind, applied);

    require_finite(record.thrust, "thrust f");
    require_finite(record.moment, "moment M_c");
    require_finite(record.rotor_speeds, "rotor speeds");
    require_finite(record.delta1_bar, "adaptive term Delta1_bar");
    require_finite(record.delta2_bar, "adaptive term Delta2_bar");
    require_finite(record.delta1, "disturbance Delta1");
    require_finite(record.delta2, "disturbance Delta2");
    require_finite(record.V, "Lyapunov value V");

    const WrenchFn fn = [&](double tt, const RigidBodyState& s) {
      return plant_wrench(tt, s, cmd, hint);
    };
    const RigidBodyState next = step_rk4(state_, t, dt, fn, config_.quad);
    require_finite(next.x, "position x");
    require_finite(next.v, "velocity v");
    require_finite(next.R, "attitude R");
    require_finite(next.Omega, "angular velocity Omega");

    state_ = next;
    nn1_ = res.nn1;
    nn2_ = res.nn2;
    last_diag_ = res.diagnostics;
    ++step_index_;
    return record;
  } catch (const SimulationAbort&) {
    throw;
  } catch (const Error& e) {
    throw SimulationAbort("step " + std::to_string(step_index_) + " (t = " + std::to_string(t) +
                              " s): " + e.what(),
                          step_index_, t);
  }
}

SimulationResult run_simulation(const SimConfig& config) {
  Simulation sim(config);
  SimulationResult out;
  const long steps = std::lround(config.duration / config.dt);
  out.records.reserve(static_cast<std::size_t>(steps));
  try {
    for (long k = 0; k < steps; ++k) out.records.push_back(sim.step());
  } catch (const SimulationAbort& e) {
    out.aborted = true;
    out.abort_reason = e.what();
    out.abort_step = e.step();
    out.abort_time = e.time();
  }
  out.nn1 = sim.nn1();
  out.nn2 = sim.nn2();
  out.report = sim.report();
  return out;
}

void write_run_summary(std::ostream& os, const SimConfig& c, const SimulationResult& r) {
  const auto old_precision = os.precision(12);
  os << "run.plant: " << to_string(c.plant) << '\n'
     << "run.trajectory: " << scenarios::to_string(c.trajectory.kind) << '\n'
     << "run.wind: " << scenarios::to_string(c.wind.kind) << '\n'
     << "run.adaptation: " << (c.adaptation ? "on" : "off") << '\n'
     << "run.dt: " << c.dt << '\n'
     << "run.duration: " << c.duration << '\n'
     << "run.seed: " << c.seed << '\n'
     << "run.aborted: " << (r.aborted ? "true" : "false") << '\n';
  if (r.aborted) {
    os << "run.abort_step: " << r.abort_step << '\n'
       << "run.abort_time: " << r.abort_time << '\n'
       << "run.abort_reason: " << r.abort_reason << '\n';
  }
  os.precision(old_precision);
  if (!r.records.empty()) write_summary(os, summarize(r.records));
  stability::write_report(os, r.report);
}

void write_outputs(const SimConfig& c, const SimulationResult& r) {
  if (!c.telemetry_path.empty()) write_csv(r.records, c.telemetry_path, c.decimate);
  if (!c.weights_path.empty()) write_weights(r.nn1, r.nn2, c.weights_path);
  if (!c.summary_path.empty()) {
    std::ofstream os(c.summary_path);
    if (!os) throw IOError("cannot open '" + c.summary_path + "' for writing");
    write_run_summary(os, c, r);
  }
}

}  // namespace quadadapt
