#pragma once

#include <array>
#include <utility>

#include "quadadapt/dynamics.hpp"
#include "quadadapt/types.hpp"

namespace quadadapt::aero {

/// Physical rotor and airframe constants for the wind-aware plant.
struct RotorAeroParams {
  double air_density = 1.225;      // rho, kg/m^3
  double rotor_radius = 0.1;       // r_p, m
  int blade_count = 2;             // N_b
  double chord = 0.015707963267948967;  // c, m (solidity 0.1 at r_p = 0.1)
  double lift_slope = 5.7;         // C_l_alpha, 1/rad
  double blade_pitch = 0.2;        // theta_0, rad
  double profile_drag = 0.01;      // C_D0
  double flap_coeff = 0.01;        // C_alpha, rad s/m
  double blade_stiffness = 0.1;    // K_beta, N m/rad
  double body_drag = 0.1;          // C_d, kg/m
  double omega_min = kDefaultOmegaMin;

  double sweep_area() const;  // pi r_p^2
  double solidity() const;    // N_b c / (pi r_p)
  void validate() const;
};

struct AdvanceRatios {
  double mu_x = 0.0;  // in-plane
  double mu_z = 0.0;  // axial
};

struct ThrustInflow {
  double thrust_coeff = 0.0;  // C_T
  double inflow = 0.0;        // lambda
  int iterations = 0;
  bool used_bisection = false;
};

/// Everything computed for one rotor at one instant.
struct RotorWindState {
  Vector3 relative_wind = Vector3::Zero();  // u1, u2, u3 (body)
  AdvanceRatios mu;
  double inflow = 0.0;
  double thrust_coeff = 0.0;
  double torque_coeff = 0.0;
  double flap_angle = 0.0;
  Vector3 thrust_direction = -Vector3::UnitZ();
  double thrust = 0.0;  // T_j, N
  double torque = 0.0;  // Q_j, N m
};

Vector3 rotor_relative_wind(const RigidBodyState& state, const Vector3& wind,
                            const Vector3& rotor_position);

/// Throws RotorStopped when omega < omega_min.
AdvanceRatios advance_ratios(const Vector3& relative_wind, double omega,
                             double rotor_radius, double omega_min = kDefaultOmegaMin);

/// C_T(lambda) from the blade-element relation.
double thrust_coeff_from_inflow(double inflow, const AdvanceRatios& mu,
                                const RotorAeroParams& params);

/// Residuals of the two implicit relations, with the inflow relation in its
/// multiplied-out form 2 lambda sqrt(mu_x^2 + (lambda + mu_z)^2) - C_T.
std::pair<double, double> inflow_residuals(const ThrustInflow& sol, const AdvanceRatios& mu,
                                           const RotorAeroParams& params);

/// Solves the coupled thrust-coefficient / inflow-ratio system with a scalar
/// Newton iteration in lambda, falling back to bisection on [0, 1].
/// Throws NoConvergence carrying the final residual.
ThrustInflow solve_thrust_inflow(const AdvanceRatios& mu, const RotorAeroParams& params,
                                 int max_iterations = 50);

/// C_Q = C_T (lambda + mu_z) + (C_D0 s / 8)(1 + 3 mu_x^2).
double torque_coefficient(double thrust_coeff, double inflow, const AdvanceRatios& mu,
                          const RotorAeroParams& params);

struct FlapResult {
  double angle = 0.0;
  Vector3 direction = -Vector3::UnitZ();
};

/// Flap angle C_alpha sqrt(u1^2 + u2^2) and the tilted thrust direction;
/// the direction is -e3 when the in-plane wind vanishes.
FlapResult flap_direction(double u1, double u2, double flap_coeff);

/// D = -C_d ||v - v_w|| (v - v_w).
Vector3 drag_force(const Vector3& velocity, const Vector3& wind, double drag_coeff);

RotorWindState rotor_state(const RigidBodyState& state, const Vector3& wind,
                           const Vector3& rotor_position, double omega,
                           const RotorAeroParams& params);

struct AeroWrench {
  Vector3 force = Vector3::Zero();   // U_e, inertial
  Vector3 moment = Vector3::Zero();  // M_e, body
  std::array<RotorWindState, 4> rotors{};
};

/// Total force (gravity, drag, flapped rotor thrusts) and body moment (thrust
/// lever arms, alternating reactive torques, flapping hub moments).
AeroWrench resultant_wrench(const RigidBodyState& state, const Vector3& wind,
                            const Eigen::Vector4d& rotor_speeds, const QuadParams& quad,
                            const RotorAeroParams& params);

/// Hover operating point of one rotor (no relative wind).
ThrustInflow hover_solution(const RotorAeroParams& params);

/// Simplified-model coefficients that reproduce the aero hover thrust and torque.
SimplifiedModelParams calibrate_simplified(const RotorAeroParams& params);

}  // namespace quadadapt::aero
