#include "quadadapt/controller.hpp"

#include <cmath>

#include "quadadapt/errors.hpp"

namespace quadadapt::control {

void ControllerGains::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ValidationError(std::string("gains.") + name + " must be > 0");
  };
  positive(k_x, "k_x");
  positive(k_v, "k_v");
  positive(k_R, "k_R");
  positive(k_Omega, "k_Omega");
  positive(c1, "c1");
  positive(c2, "c2");
  for (const auto* g : {&position, &attitude}) {
    if (g->gamma_w < 0.0 || g->gamma_v < 0.0 || g->kappa < 0.0) {
      throw ValidationError("adaptation gains must be >= 0");
    }
  }
}

Vector3 compute_A(const Vector3& e_x, const Vector3& e_v, const Vector3& delta1_bar,
                  const Vector3& xdd_d, const ControllerGains& g, double mass,
                  double gravity) {
  return delta1_bar - g.k_x * e_x - g.k_v * e_v - mass * gravity * Vector3::UnitZ() +
         mass * xdd_d;
}

double compute_thrust(const Vector3& A, const Matrix3& R) {
  return -A.dot(R * Vector3::UnitZ());
}

Matrix3 compute_Rc(const Vector3& A, const Vector3& b1d, double eps_A) {
  const double norm_A = A.norm();
  if (!(norm_A > eps_A)) {
    throw DegenerateThrust("commanded force magnitude " + std::to_string(norm_A) +
                           " at or below floor");
  }
  const Vector3 b3c = -A / norm_A;
  const Vector3 C = -b3c.cross(b1d);
  const double norm_C = C.norm();
  if (!(norm_C > kHeadingTolerance)) {
    throw HeadingDegenerate("desired heading is parallel to the thrust axis");
  }
  const Vector3 b2c = -C / norm_C;
  Matrix3 Rc;
  Rc << b2c.cross(b3c), b2c, b3c;
  return Rc;
}

Vector3 omega_from_samples(const Matrix3& Rc_prev, const Matrix3& Rc, double dt) {
  const Matrix3 Rc_dot = (Rc - Rc_prev) / dt;
  return se3::vee_skew_part(Rc.transpose() * Rc_dot);
}

CommandedAttitudeHistory::Rates CommandedAttitudeHistory::push(const Matrix3& Rc, double dt) {
  samples_.push_back(Rc);
  while (samples_.size() > 3) samples_.pop_front();

  Rates out;
  if (samples_.size() < 2) return out;
  out.Omega_c = omega_from_samples(samples_[samples_.size() - 2], samples_.back(), dt);
  if (samples_.size() == 3 && last_Omega_c_) {
    out.Omega_c_dot = (out.Omega_c - *last_Omega_c_) / dt;
  }
  last_Omega_c_ = out.Omega_c;
  return out;
}

void CommandedAttitudeHistory::reset() {
  samples_.clear();
  last_Omega_c_.reset();
}

Vector3 compute_moment(const Vector3& e_R, const Vector3& e_Omega, const Vector3& Omega,
                       const Matrix3& R, const Matrix3& Rc, const Vector3& Omega_c,
                       const Vector3& Omega_c_dot, const Vector3& delta2_bar,
                       const Matrix3& J, const ControllerGains& g) {
  const Matrix3 RtRc = R.transpose() * Rc;
  return delta2_bar - g.k_R * e_R - g.k_Omega * e_Omega + Omega.cross(J * Omega) -
         J * (se3::hat(Omega) * RtRc * Omega_c - RtRc * Omega_c_dot);
}

Eigen::Matrix4d mixing_matrix(double dh, double c_tq) {
  Eigen::Matrix4d m;
  m << 1.0, 1.0, 1.0, 1.0,
       0.0, dh, 0.0, -dh,
       dh, 0.0, -dh, 0.0,
      -c_tq, c_tq, -c_tq, c_tq;
  return m;
}

Eigen::Vector4d allocate_rotors(double thrust, const Vector3& moment, double dh,
                                double c_tq) {
  // Closed-form inverse of mixing_matrix.
  const double sum = 0.25 * thrust;
  const double yaw = 0.25 * moment(2) / c_tq;
  const double roll = 0.5 * moment(0) / dh;
  const double pitch = 0.5 * moment(1) / dh;
  return {sum + pitch - yaw, sum + roll + yaw, sum - pitch - yaw, sum - roll + yaw};
}

ControlStepResult control_step(const RigidBodyState& s, const TrajectoryPoint& traj,
                               const nn::NNWeights& nn1, const nn::NNWeights& nn2,
                               const ControllerContext& ctx, ControllerMemory& memory,
                               double dt) {
  const ControllerGains& g = ctx.gains;
  const QuadParams& q = ctx.quad;
  ControlStepResult out{{}, nn1, nn2, {}};
  ControlDiagnostics& d = out.diagnostics;

  d.e_x = s.x - traj.x;
  d.e_v = s.v - traj.v;
  d.x_nn1 = nn::build_position_input(s.x, s.v);
  d.x_nn2 = nn::build_attitude_input(s.R, s.Omega, memory.last_euler);
  memory.last_euler = d.x_nn2.segment<3>(1);

  if (ctx.adaptation) {
    d.delta1_bar = nn::nn_output(nn1, d.x_nn1);
    d.delta2_bar = nn::nn_output(nn2, d.x_nn2);
  }

  d.A = compute_A(d.e_x, d.e_v, d.delta1_bar, traj.a, g, q.mass, q.gravity);
  const double f = compute_thrust(d.A, s.R);
  d.Rc = compute_Rc(d.A, traj.b1d, ctx.eps_A_fraction * q.mass * q.gravity);
  const auto rates = memory.history.push(d.Rc, dt);
  d.Omega_c = rates.Omega_c;
  d.Omega_c_dot = rates.Omega_c_dot;

  d.attitude = se3::tracking_errors<double>(s.R, d.Rc, s.Omega, d.Omega_c);
  d.thrust_alignment = (d.Rc * Vector3::UnitZ()).dot(s.R * Vector3::UnitZ());

  const Vector3 M = compute_moment(d.attitude.e_R, d.attitude.e_Omega, s.Omega, s.R, d.Rc,
                                   d.Omega_c, d.Omega_c_dot, d.delta2_bar, q.inertia, g);

  ControlCommand& cmd = out.command;
  cmd.thrust = f;
  cmd.moment = M;
  const double c_tq = ctx.simplified.thrust_to_torque();
  cmd.rotor_thrusts = allocate_rotors(f, M, q.arm_length, c_tq);
  for (int j = 0; j < 4; ++j) {
    const RotorSpeed rs = rotor_speed_from_thrust(cmd.rotor_thrusts(j), ctx.simplified,
                                                  ctx.omega_min);
    cmd.rotor_speeds(j) = rs.omega;
    cmd.saturated[j] = rs.saturated;
  }

  d.a1 = d.e_v + g.c1 * d.e_x;
  d.a2 = d.attitude.e_Omega + g.c2 * d.attitude.e_R;
  if (ctx.adaptation) {
    out.nn1 = nn::update_weights(nn1, d.x_nn1, d.a1, g.position, dt);
    out.nn2 = nn::update_weights(nn2, d.x_nn2, d.a2, g.attitude, dt);
  }
  return out;
}

}  // namespace quadadapt::control
