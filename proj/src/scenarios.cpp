#include "quadadapt/scenarios.hpp"

#include <cmath>
#include <numbers>

#include "quadadapt/errors.hpp"

namespace quadadapt::scenarios {

void WindField::validate() const {
  if (!base.allFinite()) throw ValidationError("wind.base must be finite");
  if (!(amplitude >= 0.0)) throw ValidationError("wind.amplitude must be >= 0");
  if (!(onset >= 0.0)) throw ValidationError("wind.onset must be >= 0");
  if (!(frequency >= 0.0)) throw ValidationError("wind.frequency must be >= 0");
  if (kind != WindKind::Constant && std::abs(direction.norm() - 1.0) > 1e-9) {
    throw ValidationError("wind.direction must be a unit vector");
  }
}

Vector3 wind_at(const WindField& f, double t) {
  switch (f.kind) {
    case WindKind::Constant:
      return f.base;
    case WindKind::StepGust:
      return t < f.onset ? f.base : Vector3(f.base + f.amplitude * f.direction);
    case WindKind::Sinusoidal:
      return f.base +
             f.amplitude * std::sin(2.0 * std::numbers::pi * f.frequency * t) * f.direction;
  }
  return f.base;
}

double max_speed(const WindField& f) {
  return f.kind == WindKind::Constant ? f.base.norm() : f.base.norm() + f.amplitude;
}

void TrajectoryGenerator::validate() const {
  if (!center.allFinite()) throw ValidationError("trajectory.center must be finite");
  switch (kind) {
    case TrajectoryKind::Hover:
      break;
    case TrajectoryKind::Helix:
      if (!std::isfinite(climb_rate)) throw ValidationError("trajectory.climb_rate must be finite");
      [[fallthrough]];
    case TrajectoryKind::Circle:
      if (!(radius > 0.0)) throw ValidationError("trajectory.radius must be > 0");
      if (!(rate > 0.0)) throw ValidationError("trajectory.rate must be > 0");
      break;
    case TrajectoryKind::Lissajous:
      if (!amplitude.allFinite() || !frequency.allFinite() || !phase.allFinite()) {
        throw ValidationError("lissajous parameters must be finite");
      }
      if ((amplitude.array() < 0.0).any() || (frequency.array() < 0.0).any()) {
        throw ValidationError("lissajous amplitude and frequency must be >= 0");
      }
      break;
  }
}

namespace {

control::TrajectoryPoint circle_point(const TrajectoryGenerator& g, double t) {
  const double r = g.radius, w = g.rate;
  const double c = std::cos(w * t), s = std::sin(w * t);
  control::TrajectoryPoint p;
  p.x = g.center + r * Vector3(c, s, 0.0);
  p.v = r * w * Vector3(-s, c, 0.0);
  p.a = -r * w * w * Vector3(c, s, 0.0);
  p.jerk = r * w * w * w * Vector3(s, -c, 0.0);
  p.b1d = Vector3(-s, c, 0.0);
  p.b1d_dot = -w * Vector3(c, s, 0.0);
  return p;
}

}  // namespace

control::TrajectoryPoint trajectory_at(const TrajectoryGenerator& g, double t) {
  switch (g.kind) {
    case TrajectoryKind::Hover: {
      control::TrajectoryPoint p;
      p.x = g.center;
      return p;
    }
    case TrajectoryKind::Circle:
      return circle_point(g, t);
    case TrajectoryKind::Helix: {
      auto p = circle_point(g, t);
      p.x.z() += g.climb_rate * t;
      p.v.z() = g.climb_rate;
      return p;
    }
    case TrajectoryKind::Lissajous: {
      control::TrajectoryPoint p;
      const auto& A = g.amplitude;
      const auto& w = g.frequency;
      for (int i = 0; i < 3; ++i) {
        const double arg = w(i) * t + g.phase(i);
        const double s = std::sin(arg), c = std::cos(arg);
        p.x(i) = g.center(i) + A(i) * s;
        p.v(i) = A(i) * w(i) * c;
        p.a(i) = -A(i) * w(i) * w(i) * s;
        p.jerk(i) = -A(i) * w(i) * w(i) * w(i) * c;
      }
      return p;
    }
  }
  return {};
}

TrajectoryBounds declared_bounds(const TrajectoryGenerator& g, double duration) {
  TrajectoryBounds b;
  switch (g.kind) {
    case TrajectoryKind::Hover:
      b.x_d_max = g.center.norm();
      break;
    case TrajectoryKind::Circle:
    case TrajectoryKind::Helix: {
      const double r = g.radius, w = g.rate;
      const double climb = g.kind == TrajectoryKind::Helix ? g.climb_rate : 0.0;
      b.x_d_max = g.center.norm() + r + std::abs(climb) * duration;
      b.v_d_max = std::hypot(r * w, climb);
      b.a_d_max = r * w * w;
      b.jerk_max = r * w * w * w;
      b.b1d_dot_max = w;
      break;
    }
    case TrajectoryKind::Lissajous: {
      const Eigen::Array3d A = g.amplitude.array();
      const Eigen::Array3d w = g.frequency.array();
      b.x_d_max = g.center.norm() + A.matrix().norm();
      b.v_d_max = (A * w).matrix().norm();
      b.a_d_max = (A * w * w).matrix().norm();
      b.jerk_max = (A * w * w * w).matrix().norm();
      break;
    }
  }
  return b;
}

double force_bound(const TrajectoryBounds& b, double mass, double gravity, double delta1_max) {
  return mass * gravity + mass * b.a_d_max + delta1_max;
}

WindKind parse_wind_kind(const std::string& s) {
  if (s == "constant") return WindKind::Constant;
  if (s == "step-gust" || s == "step_gust") return WindKind::StepGust;
  if (s == "sinusoidal") return WindKind::Sinusoidal;
  throw ValidationError("unknown wind kind '" + s + "'");
}

TrajectoryKind parse_trajectory_kind(const std::string& s) {
  if (s == "hover") return TrajectoryKind::Hover;
  if (s == "circle") return TrajectoryKind::Circle;
  if (s == "helix") return TrajectoryKind::Helix;
  if (s == "lissajous") return TrajectoryKind::Lissajous;
  throw ValidationError("unknown trajectory kind '" + s + "'");
}

std::string to_string(WindKind k) {
  switch (k) {
    case WindKind::Constant: return "constant";
    case WindKind::StepGust: return "step-gust";
    case WindKind::Sinusoidal: return "sinusoidal";
  }
  return "?";
}

std::string to_string(TrajectoryKind k) {
  switch (k) {
    case TrajectoryKind::Hover: return "hover";
    case TrajectoryKind::Circle: return "circle";
    case TrajectoryKind::Helix: return "helix";
    case TrajectoryKind::Lissajous: return "lissajous";
  }
  return "?";
}

}  // namespace quadadapt::scenarios
