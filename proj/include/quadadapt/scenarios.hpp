#pragma once

#include <string>

#include "quadadapt/controller.hpp"
#include "quadadapt/types.hpp"

// Wind fields and desired trajectories, as pure functions of time.
namespace quadadapt::scenarios {

enum class WindKind { Constant, StepGust, Sinusoidal };

struct WindField {
  WindKind kind = WindKind::Constant;
  Vector3 base = Vector3::Zero();           // m/s
  double amplitude = 0.0;                   // m/s
  double onset = 0.0;                       // s, step gust only
  double frequency = 0.0;                   // Hz, sinusoidal only
  Vector3 direction = Vector3::UnitX();     // unit

  void validate() const;
};

/// Wind velocity at time t >= 0. The step gust switches on at t = onset
/// (inclusive) and is the only discontinuity.
Vector3 wind_at(const WindField& field, double t);

/// Upper bound on ||wind_at(field, t)|| over all t.
double max_speed(const WindField& field);

enum class TrajectoryKind { Hover, Circle, Helix, Lissajous };

struct TrajectoryGenerator {
  TrajectoryKind kind = TrajectoryKind::Hover;
  Vector3 center = Vector3::Zero();   // hover point, circle centre, or lissajous centre
  double radius = 1.0;                // circle, helix
  double rate = 0.5;                  // rad/s, circle, helix
  double climb_rate = 0.2;            // m/s, helix
  Vector3 amplitude = Vector3(1.0, 1.0, 0.0);    // lissajous
  Vector3 frequency = Vector3(0.5, 1.0, 0.0);    // rad/s, lissajous
  Vector3 phase = Vector3(0.0, 0.0, 0.0);        // rad, lissajous

  void validate() const;
};

/// Desired position with analytic velocity, acceleration and jerk. Circle and
/// helix head along the horizontal tangent; hover and lissajous keep b1d = e1.
control::TrajectoryPoint trajectory_at(const TrajectoryGenerator& gen, double t);

/// Analytic suprema of the trajectory quantities over [0, duration].
struct TrajectoryBounds {
  double x_d_max = 0.0;
  double v_d_max = 0.0;
  double a_d_max = 0.0;
  double jerk_max = 0.0;      // delta3
  double b1d_dot_max = 0.0;   // delta4
};

TrajectoryBounds declared_bounds(const TrajectoryGenerator& gen, double duration);

/// m g + m a_d_max + delta1_max, a valid B1 for this trajectory.
double force_bound(const TrajectoryBounds& b, double mass, double gravity, double delta1_max);

WindKind parse_wind_kind(const std::string& name);
TrajectoryKind parse_trajectory_kind(const std::string& name);
std::string to_string(WindKind kind);
std::string to_string(TrajectoryKind kind);

}  // namespace quadadapt::scenarios
