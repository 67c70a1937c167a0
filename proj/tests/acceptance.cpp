// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "quadadapt/aero.hpp"
#include "quadadapt/dynamics.hpp"
#include "quadadapt/simulation.hpp"
#include "quadadapt/stability.hpp"

using namespace quadadapt;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Projection bookkeeping shared by every closed-loop run.
struct ProjectionLedger {
  int runs = 0;
  int violations = 0;
  double worst_ratio = 0.0;

  void record(const SimConfig& c, const SimulationResult& r) {
    ++runs;
    const NetworkConfig& n = c.network;
    auto check = [&](double norm, double bound) {
      if (norm > bound) ++violations;
      if (bound > 0.0) worst_ratio = std::max(worst_ratio, norm / bound);
    };
    for (const auto& rec : r.records) {
      check(rec.W1_norm, n.W_max1);
      check(rec.V1_norm, n.V_max1);
      check(rec.W2_norm, n.W_max2);
      check(rec.V2_norm, n.V_max2);
    }
    check(r.nn1.W.norm(), n.W_max1);
    check(r.nn1.V.norm(), n.V_max1);
    check(r.nn2.W.norm(), n.W_max2);
    check(r.nn2.V.norm(), n.V_max2);
  }
};

ProjectionLedger projection;

SimulationResult run(const SimConfig& c) {
  SimulationResult r = run_simulation(c);
  projection.record(c, r);
  return r;
}

double tail_rms(const SimulationResult& r) { return summarize(r.records).e_x_rms_tail; }

// ---------------------------------------------------------------------------

Outcome hover_inflow() {
  const aero::RotorAeroParams p;  // s = 0.1, C_la = 5.7, theta0 = 0.2
  const auto start = Clock::now();
  const aero::ThrustInflow sol = aero::solve_thrust_inflow({}, p);
  const double elapsed = seconds_since(start);
  // Hover reduces to 2 l^2 + (s C_la / 4) l - s C_la theta0 / 6 = 0.
  const double b = p.solidity() * p.lift_slope / 4.0;
  const double c = -p.solidity() * p.lift_slope * p.blade_pitch / 6.0;
  const double lambda = (-b + std::sqrt(b * b - 8.0 * c)) / 4.0;
  const bool pass = std::abs(sol.inflow - 0.0681495) < 1e-6 &&
                    std::abs(sol.thrust_coeff - 0.0092887) < 1e-6 &&
                    std::abs(sol.inflow - lambda) < 1e-6 &&
                    std::abs(sol.thrust_coeff - 2.0 * lambda * lambda) < 1e-6 && elapsed < 1e-3;
  return {pass, fmt("lambda=%.7f C_T=%.7f oracle lambda=%.7f runtime=%.2e s", sol.inflow,
                    sol.thrust_coeff, lambda, elapsed)};
}

double bisect_inflow(const aero::AdvanceRatios& mu, const aero::RotorAeroParams& p) {
  auto g = [&](double l) {
    const double w = l + mu.mu_z;
    return 2.0 * l * std::sqrt(mu.mu_x * mu.mu_x + w * w) -
           aero::thrust_coeff_from_inflow(l, mu, p);
  };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Outcome newton_vs_bisection() {
  const aero::RotorAeroParams p;
  double worst_gap = 0.0, worst_residual = 0.0;
  const auto start = Clock::now();
  for (int i = 0; i <= 30; ++i) {
    for (int j = 0; j <= 30; ++j) {
      const aero::AdvanceRatios mu{0.3 * i / 30.0, -0.05 + 0.15 * j / 30.0};
      const aero::ThrustInflow sol = aero::solve_thrust_inflow(mu, p);
      worst_gap = std::max(worst_gap, std::abs(sol.inflow - bisect_inflow(mu, p)));
      const auto [r1, r2] = aero::inflow_residuals(sol, mu, p);
      worst_residual = std::max({worst_residual, std::abs(r1), std::abs(r2)});
    }
  }
  const double elapsed = seconds_since(start);
  return {worst_gap <= 1e-8 && worst_residual < 1e-10 && elapsed < 1.0,
          fmt("max |dlambda|=%.2e max residual=%.2e runtime=%.3f s", worst_gap, worst_residual,
              elapsed)};
}

Outcome integrator_conservation() {
  QuadParams p;
  p.inertia = Vector3(0.02, 0.02, 0.04).asDiagonal();
  p.gravity = 0.0;
  const WrenchFn none = [](double, const RigidBodyState&) { return Wrench{}; };
  RigidBodyState s;
  s.Omega = Vector3(1, 2, 3);
  const Vector3 L0 = s.R * p.inertia * s.Omega;
  const double E0 = 0.5 * s.Omega.dot(p.inertia * s.Omega);
  double dL = 0.0, dE = 0.0;
  const double dt = 1e-3;
  for (long k = 0; k < 10000; ++k) {
    s = step_rk4(s, k * dt, dt, none, p);
    dL = std::max(dL, (s.R * p.inertia * s.Omega - L0).norm() / L0.norm());
    dE = std::max(dE, std::abs(0.5 * s.Omega.dot(p.inertia * s.Omega) - E0) / E0);
  }
  for (long k = 10000; k < 100000; ++k) s = step_rk4(s, k * dt, dt, none, p);
  const double drift = (s.R.transpose() * s.R - Matrix3::Identity()).norm();
  return {dL <= 1e-6 && dE <= 1e-6 && drift <= 1e-10,
          fmt("rel dL=%.2e rel dE=%.2e ||R^T R - I||=%.2e after 1e5 steps", dL, dE, drift)};
}

SimConfig baseline_config() {
  SimConfig c;
  c.plant = PlantMode::Simplified;
  c.adaptation = false;
  c.duration = 10.0;
  c.position_offset = Vector3(1, 1, 0.5);
  c.align_attitude = true;
  auto& g = c.gains;
  g.k_x = 6.8;
  g.k_v = 2.9;
  g.k_R = 1350.0;
  g.k_Omega = 1.25;
  g.c1 = 0.1;
  g.c2 = 27.0;
  g.position.kappa = g.attitude.kappa = 1.0;
  // No disturbance and no networks: the bounds only need to cover gravity and
  // the initial position error.
  auto& b = c.bounds;
  b.psi1 = 0.01;
  b.e_x_max = 1.5;
  b.B1 = c.quad.mass * c.quad.gravity;
  b.eps1 = b.eps2 = 0.0;
  c.network.W_max1 = c.network.V_max1 = c.network.W_max2 = c.network.V_max2 = 0.0;
  return c;
}

Outcome controller_baseline() {
  const SimConfig c = baseline_config();
  Simulation sim(c);
  SimulationResult r;
  double psi_max = 0.0;
  try {
    while (sim.time() < c.duration - 0.5 * c.dt) {
      r.records.push_back(sim.step());
      psi_max = std::max(psi_max, r.records.back().psi);
    }
  } catch (const SimulationAbort& e) {
    return {false, std::string("aborted: ") + e.what()};
  }
  r.nn1 = sim.nn1();
  r.nn2 = sim.nn2();
  projection.record(c, r);
  const double e_x_end = (sim.state().x - c.trajectory.center).norm();
  const double psi0 = r.records.front().psi;
  const bool gains_ok = sim.report().all_pass;
  const bool pass = gains_ok && psi0 <= c.bounds.psi1 && psi_max < 1.0 && e_x_end <= 1e-3;
  return {pass, fmt("gain checks %s, Psi(0)=%.2e <= psi1=%.2f, max Psi=%.2e, ||e_x(10 s)||=%.2e m",
                    gains_ok ? "pass" : "FAIL", psi0, c.bounds.psi1, psi_max, e_x_end)};
}

SimConfig synthetic_config() {
  SimConfig c;
  c.plant = PlantMode::Synthetic;
  c.duration = 30.0;
  c.synthetic_delta1_max = 2.0;
  c.synthetic_delta2_max = 0.1;
  auto& g = c.gains;
  g.k_x = 24.3;
  g.k_v = 6.52;
  g.k_R = 300.0;
  g.k_Omega = 4.16;
  g.c1 = 0.949;
  g.c2 = 13.76;
  g.position = {10.0, 10.0, 0.0182};
  g.attitude = {10.0, 10.0, 1.043};
  c.network = {10, 0.4, 0.0677, 0.3185, 0.5753, false, 0.0};
  auto& b = c.bounds;
  b.psi1 = 0.0023;
  b.e_x_max = 0.662;
  b.x_d_max = 0.01;
  b.v_d_max = 0.01;
  b.E_max = 0.3;
  b.B4 = 1.5;
  b.eps1 = b.eps2 = 1e-3;
  b.B1 = c.quad.mass * c.quad.gravity + c.network.W_max1 * std::sqrt(11.0);
  return c;
}

SimulationResult synthetic_on;  // reused by the Lyapunov-decrease check

Outcome synthetic_uub() {
  SimConfig on = synthetic_config();
  SimConfig off = on;
  off.adaptation = false;
  synthetic_on = run(on);
  const SimulationResult r_off = run(off);
  if (synthetic_on.aborted || r_off.aborted) return {false, "aborted"};
  const auto& rec = synthetic_on.records;
  double tail_max = 0.0;
  bool finite = true;
  for (std::size_t k = rec.size() - rec.size() / 5; k < rec.size(); ++k) {
    tail_max = std::max(tail_max, rec[k].weighted_norm);
    finite = finite && std::isfinite(rec[k].weighted_norm);
  }
  const double radius = synthetic_on.report.radius;
  const double e_on = tail_rms(synthetic_on), e_off = tail_rms(r_off);
  const bool pass = synthetic_on.report.all_pass && finite && tail_max <= radius &&
                    e_off >= 5.0 * e_on;
  return {pass, fmt("gain checks %s, tail max weighted norm=%.3e <= C5/nu=%.3e, tail RMS e_x "
                    "on=%.3e off=%.3e ratio=%.1f",
                    synthetic_on.report.all_pass ? "pass" : "FAIL", tail_max, radius, e_on,
                    e_off, e_off / e_on)};
}

Outcome lyapunov_decrease() {
  const SimConfig c = synthetic_config();
  const auto& rec = synthetic_on.records;
  if (rec.size() < 2) return {false, "criterion-5 run missing"};
  const double nu = synthetic_on.report.nu;
  const double C5 = synthetic_on.report.constants.C5_total;
  const double tol = 10.0 * c.dt;
  int outside = 0, violations = 0, midpoint_violations = 0;
  double worst_midpoint = -INFINITY;
  for (std::size_t k = 0; k + 1 < rec.size(); ++k) {
    const double Vdot = (rec[k + 1].V - rec[k].V) / c.dt;
    if (rec[k].V > C5 / nu) {
      ++outside;
      if (Vdot > -nu * rec[k].V + C5 + tol) ++violations;
    }
    // The same inequality at every step, with V taken at the interval midpoint.
    const double margin = Vdot - (-nu * 0.5 * (rec[k].V + rec[k + 1].V) + C5);
    worst_midpoint = std::max(worst_midpoint, margin);
    if (margin > tol) ++midpoint_violations;
  }
  return {violations == 0 && midpoint_violations == 0,
          fmt("tol=10*dt=%.0e; steps with V > C5/nu: %d, violations: %d; all-step check "
              "violations: %d, worst margin %.3e",
              tol, outside, violations, midpoint_violations, worst_midpoint)};
}

Outcome wind_rejection() {
  SimConfig on;
  on.plant = PlantMode::Full;
  on.duration = 30.0;
  on.trajectory.kind = scenarios::TrajectoryKind::Circle;
  on.trajectory.radius = 2.0;
  on.trajectory.rate = 0.5;
  on.wind.base = Vector3(5, 0, 0);
  on.gains.k_x = 4.0;
  on.gains.k_v = 2.8;
  SimConfig off = on;
  off.adaptation = false;
  const SimulationResult a = run(on), b = run(off);
  if (a.aborted || b.aborted) {
    return {false, "aborted: " + (a.aborted ? a.abort_reason : b.abort_reason)};
  }
  const double e_on = tail_rms(a), e_off = tail_rms(b);
  return {e_off >= 3.0 * e_on,
          fmt("tail RMS e_x on=%.4f m off=%.4f m ratio=%.1f", e_on, e_off, e_off / e_on)};
}

double max_velocity_residual(double dt) {
  SimConfig c;
  c.plant = PlantMode::Simplified;
  c.dt = dt;
  c.duration = 5.0;
  c.trajectory.kind = scenarios::TrajectoryKind::Circle;
  c.delta_force = Vector3(0.5, -0.3, 0.2);
  c.delta_moment = Vector3(0.01, -0.02, 0.005);
  c.position_offset = Vector3(0.2, -0.1, 0.1);
  const double m = c.quad.mass;
  const auto& g = c.gains;
  Simulation sim(c);
  SimulationResult ledger;
  TelemetryRecord prev = sim.step();
  control::ControlDiagnostics prev_diag = sim.diagnostics();
  double worst = 0.0;
  const long steps = std::lround(c.duration / dt);
  for (long k = 1; k < steps; ++k) {
    const TelemetryRecord next = sim.step();
    // m e_v' = -k_x e_x - k_v e_v - (Delta1 - Delta1_bar) - X with X = A + f R e3.
    const Vector3 X = prev_diag.A + prev.thrust * prev.R.col(2);
    const Vector3 tilde = prev.delta1 - prev.delta1_bar;
    const Vector3 res =
        m * (next.e_v - prev.e_v) + dt * (g.k_x * prev.e_x + g.k_v * prev.e_v + tilde + X);
    worst = std::max(worst, res.norm());
    ledger.records.push_back(prev);
    prev = next;
    prev_diag = sim.diagnostics();
  }
  ledger.nn1 = sim.nn1();
  ledger.nn2 = sim.nn2();
  projection.record(c, ledger);
  return worst;
}

Outcome error_dynamics_residual() {
  const double r1 = max_velocity_residual(1e-3);
  const double r2 = max_velocity_residual(5e-4);
  const double order = std::log2(r1 / r2);
  const bool pass = r1 <= 10.0 * 1e-6 && r2 <= 10.0 * 0.25e-6 && order >= 1.8 && order <= 2.2;
  return {pass, fmt("max residual dt=1e-3: %.3e (<= %.0e), dt=5e-4: %.3e (<= %.1e), "
                    "observed order %.2f",
                    r1, 1e-5, r2, 2.5e-6, order)};
}

Outcome gain_vectors() {
  const auto fail = stability::validate_c1(2.5, 16.0, 4.0);
  const auto ok = stability::validate_c1(1.0, 16.0, 4.0);
  control::ControllerGains g;
  g.k_x = 16.0;
  g.c1 = std::sqrt(16.0 / 4.0);
  const auto report = stability::build_pd_matrices(g, 4.0, Vector3(0.02, 0.02, 0.04).asDiagonal(),
                                                   stability::BoundAssumptions{});
  const double lmin = report.M11.min_eigenvalue();
  return {!fail.pass && ok.pass && std::abs(lmin) < 1e-12,
          fmt("c1=2.5 -> %s, c1=1 -> %s, lambda_min(M11) at c1=2: %.1e",
              fail.pass ? "pass" : "fail", ok.pass ? "pass" : "fail", lmin)};
}

Outcome projection_safety() {
  return {projection.runs > 0 && projection.violations == 0,
          fmt("%d runs, %d bound violations, max ||.||_F / bound = %.6f", projection.runs,
              projection.violations, projection.worst_ratio)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  // Projection safety runs after every closed-loop criterion.
  const std::vector<Criterion> criteria = {
      {1, "hover inflow closed form", hover_inflow},
      {2, "Newton vs bisection", newton_vs_bisection},
      {3, "integrator conservation", integrator_conservation},
      {4, "geometric controller baseline", controller_baseline},
      {5, "synthetic-truth ultimate boundedness", synthetic_uub},
      {6, "Lyapunov decrease", lyapunov_decrease},
      {7, "wind rejection", wind_rejection},
      {9, "error-dynamics residual", error_dynamics_residual},
      {10, "gain validator vectors", gain_vectors},
      {8, "projection safety", projection_safety},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2d %s  %s: %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
