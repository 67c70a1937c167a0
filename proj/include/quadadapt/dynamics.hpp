#pragma once

#include <array>
#include <functional>

#include "quadadapt/types.hpp"

namespace quadadapt {

inline constexpr double kDefaultOmegaMin = 1.0;  // rad/s

/// Rigid-body constants of the vehicle. Rotors sit at
/// r1 = [dh,0,dv], r2 = [0,-dh,dv], r3 = [-dh,0,dv], r4 = [0,dh,dv] (body frame,
/// third axis pointing down).
struct QuadParams {
  double mass = 1.0;
  Matrix3 inertia = Eigen::Vector3d(0.02, 0.02, 0.04).asDiagonal();
  double arm_length = 0.2;       // d_h
  double rotor_height = 0.05;    // d_v
  double gravity = 9.81;

  Vector3 rotor_position(int j) const;  // j in [0, 4)
  void validate() const;                // throws ValidationError
};

/// Constant-coefficient rotor model assumed by the controller:
/// T' = C_T' w^2, Q' = C_Q' w^2 = C_TQ T'.
struct SimplifiedModelParams {
  double thrust_coeff = 3.5747e-6;  // C_T', N s^2
  double torque_coeff = 2.9172e-8;  // C_Q', N m s^2

  double thrust_to_torque() const { return torque_coeff / thrust_coeff; }  // C_TQ, m
  void validate() const;
};

struct StateDerivative {
  Vector3 x_dot;
  Vector3 v_dot;
  Matrix3 R_dot;
  Vector3 Omega_dot;
};

/// x' = v, m v' = U_e, R' = R hat(Omega), J Omega' + Omega x J Omega = M_e.
StateDerivative state_derivative(const RigidBodyState& state, const Vector3& U_e,
                                 const Vector3& M_e, const QuadParams& params);

using WrenchFn = std::function<Wrench(double t, const RigidBodyState& state)>;

/// One classical RK4 step on (x, v, Omega). The attitude is advanced with the
/// exponential map of the RK-weighted body rotation increment plus the
/// second-order Magnus commutator term, then re-projected onto SO(3).
RigidBodyState step_rk4(const RigidBodyState& state, double t, double dt,
                        const WrenchFn& wrench, const QuadParams& params);

struct RotorSpeed {
  double omega = 0.0;
  bool saturated = false;
};

/// w = sqrt(max(T', T_min) / C_T') with T_min = C_T' w_min^2.
RotorSpeed rotor_speed_from_thrust(double thrust, const SimplifiedModelParams& params,
                                   double omega_min = kDefaultOmegaMin);

/// (m g e3 - f R e3 - Delta1, M_c - Delta2).
Wrench simplified_wrench(const RigidBodyState& state, double thrust,
                         const Vector3& moment, const QuadParams& params,
                         const Vector3& delta_force, const Vector3& delta_moment);

}  // namespace quadadapt
