#include "quadadapt/dynamics.hpp"

#include <cmath>
#include <string>

#include "quadadapt/errors.hpp"
#include "quadadapt/se3.hpp"

namespace quadadapt {

Vector3 QuadParams::rotor_position(int j) const {
  switch (j) {
    case 0: return {arm_length, 0.0, rotor_height};
    case 1: return {0.0, -arm_length, rotor_height};
    case 2: return {-arm_length, 0.0, rotor_height};
    case 3: return {0.0, arm_length, rotor_height};
    default: throw std::out_of_range("rotor index " + std::to_string(j));
  }
}

void QuadParams::validate() const {
  if (!(mass > 0.0)) throw ValidationError("quad.mass must be > 0");
  if (!(arm_length > 0.0)) throw ValidationError("quad.arm_length must be > 0");
  if (!(gravity >= 0.0)) throw ValidationError("quad.gravity must be >= 0");
  if ((inertia - inertia.transpose()).norm() > 1e-12) {
    throw ValidationError("quad.inertia must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix3> eig(inertia);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    throw ValidationError("quad.inertia must be positive-definite");
  }
}

void SimplifiedModelParams::validate() const {
  if (!(thrust_coeff > 0.0)) throw ValidationError("simplified.thrust_coeff must be > 0");
  if (!(torque_coeff > 0.0)) throw ValidationError("simplified.torque_coeff must be > 0");
}

StateDerivative state_derivative(const RigidBodyState& s, const Vector3& U_e,
                                 const Vector3& M_e, const QuadParams& p) {
  StateDerivative d;
  d.x_dot = s.v;
  d.v_dot = U_e / p.mass;
  d.R_dot = s.R * se3::hat(s.Omega);
  d.Omega_dot = p.inertia.llt().solve(M_e - s.Omega.cross(p.inertia * s.Omega));
  return d;
}

namespace {

struct Slope {
  Vector3 x_dot, v_dot, Omega_dot;
};

Slope evaluate(double t, const RigidBodyState& s, const WrenchFn& wrench,
               const QuadParams& p, const Eigen::LLT<Matrix3>& J_llt) {
  const Wrench w = wrench(t, s);
  return {s.v, w.force / p.mass,
          J_llt.solve(w.moment - s.Omega.cross(p.inertia * s.Omega))};
}

RigidBodyState advance(const RigidBodyState& base, const Slope& k,
                       const Vector3& Omega_stage, double h) {
  RigidBodyState s;
  s.x = base.x + h * k.x_dot;
  s.v = base.v + h * k.v_dot;
  s.Omega = base.Omega + h * k.Omega_dot;
  s.R = base.R * se3::exp_so3(h * Omega_stage);
  return s;
}

}  // namespace

RigidBodyState step_rk4(const RigidBodyState& s, double t, double dt,
                        const WrenchFn& wrench, const QuadParams& p) {
  const Eigen::LLT<Matrix3> J_llt(p.inertia);
  const double h = dt;

  const Slope k1 = evaluate(t, s, wrench, p, J_llt);
  const RigidBodyState s2 = advance(s, k1, s.Omega, 0.5 * h);
  const Slope k2 = evaluate(t + 0.5 * h, s2, wrench, p, J_llt);
  const RigidBodyState s3 = advance(s, k2, s2.Omega, 0.5 * h);
  const Slope k3 = evaluate(t + 0.5 * h, s3, wrench, p, J_llt);
  const RigidBodyState s4 = advance(s, k3, s3.Omega, h);
  const Slope k4 = evaluate(t + h, s4, wrench, p, J_llt);

  RigidBodyState out;
  out.x = s.x + h / 6.0 * (k1.x_dot + 2.0 * k2.x_dot + 2.0 * k3.x_dot + k4.x_dot);
  out.v = s.v + h / 6.0 * (k1.v_dot + 2.0 * k2.v_dot + 2.0 * k3.v_dot + k4.v_dot);
  out.Omega = s.Omega + h / 6.0 * (k1.Omega_dot + 2.0 * k2.Omega_dot +
                                   2.0 * k3.Omega_dot + k4.Omega_dot);

  // Body rotation increment: quadrature of Omega over the step plus the
  // h^2/12 [Omega(t), Omega(t+h)] Magnus correction for R' = R hat(Omega).
  const Vector3 increment =
      h / 6.0 * (s.Omega + 2.0 * s2.Omega + 2.0 * s3.Omega + s4.Omega) +
      h * h / 12.0 * s.Omega.cross(out.Omega);
  out.R = se3::orthonormalize(s.R * se3::exp_so3(increment));
  return out;
}

RotorSpeed rotor_speed_from_thrust(double thrust, const SimplifiedModelParams& p,
                                   double omega_min) {
  const double t_min = p.thrust_coeff * omega_min * omega_min;
  if (!(thrust >= t_min)) return {omega_min, true};
  return {std::sqrt(thrust / p.thrust_coeff), false};
}

Wrench simplified_wrench(const RigidBodyState& s, double thrust, const Vector3& moment,
                         const QuadParams& p, const Vector3& delta_force,
                         const Vector3& delta_moment) {
  const Vector3 e3 = Vector3::UnitZ();
  return {p.mass * p.gravity * e3 - thrust * s.R * e3 - delta_force,
          moment - delta_moment};
}

}  // namespace quadadapt
