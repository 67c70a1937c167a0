#include "quadadapt/aero.hpp"

#include <cmath>
#include <numbers>

#include "quadadapt/errors.hpp"
#include "quadadapt/se3.hpp"

namespace quadadapt::aero {

double RotorAeroParams::sweep_area() const {
  return std::numbers::pi * rotor_radius * rotor_radius;
}

double RotorAeroParams::solidity() const {
  return blade_count * chord / (std::numbers::pi * rotor_radius);
}

void RotorAeroParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ValidationError(std::string("aero.") + name + " must be > 0");
  };
  positive(air_density, "air_density");
  positive(rotor_radius, "rotor_radius");
  positive(blade_count, "blade_count");
  positive(chord, "chord");
  positive(lift_slope, "lift_slope");
  positive(blade_pitch, "blade_pitch");
  positive(profile_drag, "profile_drag");
  positive(omega_min, "omega_min");
  // Flapping and drag may be switched off for model-equivalence runs.
  if (flap_coeff < 0.0) throw ValidationError("aero.flap_coeff must be >= 0");
  if (blade_stiffness < 0.0) throw ValidationError("aero.blade_stiffness must be >= 0");
  if (body_drag < 0.0) throw ValidationError("aero.body_drag must be >= 0");
  if (!(solidity() < 1.0)) throw ValidationError("aero solidity must be < 1");
}

Vector3 rotor_relative_wind(const RigidBodyState& s, const Vector3& wind,
                            const Vector3& r) {
  return s.R.transpose() * (wind - s.v) + s.Omega.cross(r);
}

AdvanceRatios advance_ratios(const Vector3& u, double omega, double rotor_radius,
                             double omega_min) {
  if (!(omega >= omega_min)) {
    throw RotorStopped("rotor speed " + std::to_string(omega) + " rad/s below floor");
  }
  const double tip = omega * rotor_radius;
  return {std::hypot(u(0), u(1)) / tip, u(2) / tip};
}

double thrust_coeff_from_inflow(double lambda, const AdvanceRatios& mu,
                                const RotorAeroParams& p) {
  const double s_cla = p.solidity() * p.lift_slope;
  return 0.5 * s_cla *
         (p.blade_pitch * (1.0 / 3.0 + 0.5 * mu.mu_x * mu.mu_x) - 0.5 * (lambda + mu.mu_z));
}

namespace {

// g(lambda) = 2 lambda sqrt(mu_x^2 + (lambda + mu_z)^2) - C_T(lambda)
double inflow_residual(double lambda, const AdvanceRatios& mu, const RotorAeroParams& p) {
  const double w = lambda + mu.mu_z;
  return 2.0 * lambda * std::sqrt(mu.mu_x * mu.mu_x + w * w) -
         thrust_coeff_from_inflow(lambda, mu, p);
}

double inflow_residual_slope(double lambda, const AdvanceRatios& mu,
                             const RotorAeroParams& p) {
  const double w = lambda + mu.mu_z;
  const double q = std::sqrt(mu.mu_x * mu.mu_x + w * w);
  const double cross = q > 1e-300 ? 2.0 * lambda * w / q : 2.0 * lambda * std::copysign(1.0, w);
  return 2.0 * q + cross + 0.25 * p.solidity() * p.lift_slope;
}

constexpr double kResidualTol = 1e-14;

}  // namespace

std::pair<double, double> inflow_residuals(const ThrustInflow& sol, const AdvanceRatios& mu,
                                           const RotorAeroParams& p) {
  const double ct_res = sol.thrust_coeff - thrust_coeff_from_inflow(sol.inflow, mu, p);
  const double w = sol.inflow + mu.mu_z;
  const double lambda_res =
      2.0 * sol.inflow * std::sqrt(mu.mu_x * mu.mu_x + w * w) - sol.thrust_coeff;
  return {ct_res, lambda_res};
}

ThrustInflow solve_thrust_inflow(const AdvanceRatios& mu, const RotorAeroParams& p,
                                 int max_iterations) {
  const double s_cla = p.solidity() * p.lift_slope;
  double lambda = std::sqrt(std::max(0.0, s_cla * p.blade_pitch / 12.0));

  ThrustInflow out;
  for (int it = 1; it <= max_iterations; ++it) {
    const double g = inflow_residual(lambda, mu, p);
    if (std::abs(g) <= kResidualTol) {
      out.iterations = it - 1;
      out.inflow = lambda;
      out.thrust_coeff = thrust_coeff_from_inflow(lambda, mu, p);
      return out;
    }
    const double slope = inflow_residual_slope(lambda, mu, p);
    const double next = lambda - g / slope;
    if (!std::isfinite(next) || next < -1.0 || next > 2.0) break;
    const bool stalled = std::abs(next - lambda) <= 1e-16 * (1.0 + std::abs(lambda));
    lambda = next;
    if (stalled) {
      out.iterations = it;
      out.inflow = lambda;
      out.thrust_coeff = thrust_coeff_from_inflow(lambda, mu, p);
      if (std::abs(inflow_residual(lambda, mu, p)) <= 1e-12) return out;
      break;
    }
  }

  // Newton diverged or stalled: bisection on [0, 1].
  double lo = 0.0, hi = 1.0;
  double g_lo = inflow_residual(lo, mu, p);
  const double g_hi = inflow_residual(hi, mu, p);
  if (g_lo == 0.0) return {thrust_coeff_from_inflow(lo, mu, p), lo, max_iterations, true};
  if (g_lo * g_hi > 0.0) {
    throw NoConvergence("solve_thrust_inflow: no root bracketed in [0, 1]",
                        std::abs(inflow_residual(lambda, mu, p)));
  }
  int it = 0;
  for (; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = inflow_residual(mid, mu, p);
    if ((g_mid < 0.0) == (g_lo < 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  const double root = 0.5 * (lo + hi);
  const double res = std::abs(inflow_residual(root, mu, p));
  if (res > 1e-10) throw NoConvergence("solve_thrust_inflow: bisection did not converge", res);
  return {thrust_coeff_from_inflow(root, mu, p), root, max_iterations + it, true};
}

double torque_coefficient(double ct, double lambda, const AdvanceRatios& mu,
                          const RotorAeroParams& p) {
  return ct * (lambda + mu.mu_z) +
         p.profile_drag * p.solidity() / 8.0 * (1.0 + 3.0 * mu.mu_x * mu.mu_x);
}

FlapResult flap_direction(double u1, double u2, double flap_coeff) {
  const double in_plane = std::hypot(u1, u2);
  FlapResult out;
  out.angle = flap_coeff * in_plane;
  if (in_plane == 0.0) return out;
  const double s = std::sin(out.angle) / in_plane;
  out.direction = Vector3(-s * u1, -s * u2, -std::cos(out.angle));
  return out;
}

Vector3 drag_force(const Vector3& v, const Vector3& wind, double drag_coeff) {
  const Vector3 rel = v - wind;
  return -drag_coeff * rel.norm() * rel;
}

RotorWindState rotor_state(const RigidBodyState& s, const Vector3& wind,
                           const Vector3& r, double omega, const RotorAeroParams& p) {
  RotorWindState out;
  out.relative_wind = rotor_relative_wind(s, wind, r);
  out.mu = advance_ratios(out.relative_wind, omega, p.rotor_radius, p.omega_min);
  const ThrustInflow sol = solve_thrust_inflow(out.mu, p);
  out.inflow = sol.inflow;
  out.thrust_coeff = sol.thrust_coeff;
  out.torque_coeff = torque_coefficient(sol.thrust_coeff, sol.inflow, out.mu, p);
  const FlapResult flap =
      flap_direction(out.relative_wind(0), out.relative_wind(1), p.flap_coeff);
  out.flap_angle = flap.angle;
  out.thrust_direction = flap.direction;
  const double tip = p.rotor_radius * omega;
  const double dyn = p.air_density * p.sweep_area() * tip * tip;
  out.thrust = out.thrust_coeff * dyn;
  out.torque = out.torque_coeff * dyn * p.rotor_radius;
  return out;
}

AeroWrench resultant_wrench(const RigidBodyState& s, const Vector3& wind,
                            const Eigen::Vector4d& rotor_speeds, const QuadParams& quad,
                            const RotorAeroParams& p) {
  AeroWrench out;
  Vector3 body_thrust = Vector3::Zero();
  const double flap_scale = 0.5 * p.blade_count * p.blade_stiffness;
  for (int j = 0; j < 4; ++j) {
    const Vector3 r = quad.rotor_position(j);
    RotorWindState rs = rotor_state(s, wind, r, rotor_speeds(j), p);
    const Vector3& d = rs.thrust_direction;
    const double spin = (j % 2 == 0) ? 1.0 : -1.0;  // (-1)^(j+1), j 1-based
    body_thrust += rs.thrust * d;
    out.moment += r.cross(rs.thrust * d) + spin * rs.torque * d;
    // Hub moment from flapping: d.e1 about b1 and d.e2 about b2.
    out.moment += flap_scale * rs.flap_angle * Vector3(d(0), d(1), 0.0);
    out.rotors[j] = rs;
  }
  out.force = quad.mass * quad.gravity * Vector3::UnitZ() +
              drag_force(s.v, wind, p.body_drag) + s.R * body_thrust;
  return out;
}

ThrustInflow hover_solution(const RotorAeroParams& p) {
  return solve_thrust_inflow(AdvanceRatios{}, p);
}

SimplifiedModelParams calibrate_simplified(const RotorAeroParams& p) {
  const ThrustInflow h = hover_solution(p);
  const double cq = torque_coefficient(h.thrust_coeff, h.inflow, AdvanceRatios{}, p);
  const double base = p.air_density * p.sweep_area() * p.rotor_radius * p.rotor_radius;
  return {h.thrust_coeff * base, cq * base * p.rotor_radius};
}

}  // namespace quadadapt::aero
