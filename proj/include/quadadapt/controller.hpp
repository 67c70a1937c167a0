#pragma once

#include <array>
#include <deque>
#include <optional>

#include "quadadapt/dynamics.hpp"
#include "quadadapt/neural.hpp"
#include "quadadapt/se3.hpp"
#include "quadadapt/types.hpp"

namespace quadadapt::control {

struct ControllerGains {
  double k_x = 16.0;
  double k_v = 8.0;
  double k_R = 2.0;
  double k_Omega = 0.4;
  double c1 = 1.0;
  double c2 = 1.0;
  nn::AdaptationGains position{};
  nn::AdaptationGains attitude{};

  void validate() const;
};

/// Desired position and its time derivatives, plus the heading direction.
struct TrajectoryPoint {
  Vector3 x = Vector3::Zero();
  Vector3 v = Vector3::Zero();
  Vector3 a = Vector3::Zero();
  Vector3 jerk = Vector3::Zero();
  Vector3 b1d = Vector3::UnitX();
  Vector3 b1d_dot = Vector3::Zero();
};

struct ControlCommand {
  double thrust = 0.0;                  // f
  Vector3 moment = Vector3::Zero();     // M_c
  Eigen::Vector4d rotor_thrusts = Eigen::Vector4d::Zero();  // T'_j
  Eigen::Vector4d rotor_speeds = Eigen::Vector4d::Zero();   // w_j
  std::array<bool, 4> saturated{};
};

/// A = Delta1_bar - kx e_x - kv e_v - m g e3 + m xdd_d.
Vector3 compute_A(const Vector3& e_x, const Vector3& e_v, const Vector3& delta1_bar,
                  const Vector3& xdd_d, const ControllerGains& gains, double mass,
                  double gravity);

/// f = -A^T R e3.
double compute_thrust(const Vector3& A, const Matrix3& R);

/// R_c = [b2c x b3c, -C/|C|, -A/|A|] with C = -b3c x b1d.
/// Throws DegenerateThrust when |A| <= eps_A, HeadingDegenerate when b1d is
/// (anti)parallel to b3c.
Matrix3 compute_Rc(const Vector3& A, const Vector3& b1d, double eps_A);

inline constexpr double kHeadingTolerance = 1e-6;

/// Backward-difference estimates of the commanded angular velocity and its
/// derivative from the last three R_c samples.
class CommandedAttitudeHistory {
 public:
  struct Rates {
    Vector3 Omega_c = Vector3::Zero();
    Vector3 Omega_c_dot = Vector3::Zero();
  };

  /// Appends R_c and returns the rates at the newest sample. Zeros on the
  /// first call; Omega_c_dot stays zero until three samples exist.
  Rates push(const Matrix3& Rc, double dt);
  void reset();
  std::size_t size() const { return samples_.size(); }

 private:
  std::deque<Matrix3> samples_;
  std::optional<Vector3> last_Omega_c_;
};

/// Omega_c from two R_c samples: vee of the skew part of R_c^T (R_c - R_c_prev)/dt.
Vector3 omega_from_samples(const Matrix3& Rc_prev, const Matrix3& Rc, double dt);

/// M_c = Delta2_bar - kR e_R - kO e_O + O x J O - J(hat(O) R^T Rc Oc - R^T Rc Oc_dot).
Vector3 compute_moment(const Vector3& e_R, const Vector3& e_Omega, const Vector3& Omega,
                       const Matrix3& R, const Matrix3& Rc, const Vector3& Omega_c,
                       const Vector3& Omega_c_dot, const Vector3& delta2_bar,
                       const Matrix3& inertia, const ControllerGains& gains);

/// Maps rotor thrusts to (f, M1, M2, M3):
///   f  = T1 + T2 + T3 + T4
///   M1 = dh (T2 - T4)
///   M2 = dh (T1 - T3)
///   M3 = C_TQ (-T1 + T2 - T3 + T4)
Eigen::Matrix4d mixing_matrix(double arm_length, double c_tq);

/// Inverse of mixing_matrix applied to (f, M_c). Negative thrusts pass through.
Eigen::Vector4d allocate_rotors(double thrust, const Vector3& moment, double arm_length,
                                double c_tq);

struct ControlDiagnostics {
  Vector3 e_x = Vector3::Zero();
  Vector3 e_v = Vector3::Zero();
  se3::AttitudeErrorSet<double> attitude{};
  Vector3 A = Vector3::Zero();
  Matrix3 Rc = Matrix3::Identity();
  Vector3 Omega_c = Vector3::Zero();
  Vector3 Omega_c_dot = Vector3::Zero();
  Vector3 delta1_bar = Vector3::Zero();
  Vector3 delta2_bar = Vector3::Zero();
  Vector3 a1 = Vector3::Zero();
  Vector3 a2 = Vector3::Zero();
  VectorX x_nn1;
  VectorX x_nn2;
  double thrust_alignment = 1.0;  // e3^T Rc^T R e3
};

struct ControlStepResult {
  ControlCommand command;
  nn::NNWeights nn1;
  nn::NNWeights nn2;
  ControlDiagnostics diagnostics;
};

/// Per-instance controller memory: the R_c history and the last valid Euler
/// angles fed to the attitude network.
struct ControllerMemory {
  CommandedAttitudeHistory history;
  std::optional<Vector3> last_euler;
};

struct ControllerContext {
  ControllerGains gains;
  QuadParams quad;
  SimplifiedModelParams simplified;
  bool adaptation = true;
  double omega_min = kDefaultOmegaMin;
  double eps_A_fraction = 1e-6;  // eps_A = fraction * m g
};

/// One control update: errors, adaptive terms, f, R_c, Omega_c, M_c,
/// allocation and rotor speeds, then one weight update of both networks with
/// a1 = e_v + c1 e_x and a2 = e_Omega + c2 e_R. With adaptation off the
/// networks are neither evaluated nor updated.
ControlStepResult control_step(const RigidBodyState& state, const TrajectoryPoint& traj,
                               const nn::NNWeights& nn1, const nn::NNWeights& nn2,
                               const ControllerContext& ctx, ControllerMemory& memory,
                               double dt);

}  // namespace quadadapt::control
