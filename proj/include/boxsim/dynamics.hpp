#pragma once
#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "boxsim/units.hpp"

namespace boxsim {

using Vec2 = Eigen::Vector2d;

// One atom's phase-space point at time t. Everything is dimensionless:
// positions in units of l, momenta in units of m*nu (numerically equal to
// velocities since m scales out), time in units of tau.
struct PhaseState {
  Vec2 r{0.0, 0.0};
  Vec2 p{0.0, 0.0};
  double t = 0.0;
};

struct TrapSpec {
  TrapKind kind = TrapKind::Wedge;
  double alpha = 0.0;  // wedge half-angle, radians; unused for harmonic
  double tan_alpha = 0.0;
  double sin_alpha = 0.0;
  double cos_alpha = 0.0;
  CharScales scales;

  static TrapSpec wedge(double alpha_rad, const PhysicalParams& phys = {});
  static TrapSpec harmonic(const PhysicalParams& phys = {});
};

enum class Wall { Left, Right };

struct WallEvent {
  double dt = 0.0;  // time until impact, > 0
  Wall wall = Wall::Right;
};

// Dimensionless Hamiltonian: p^2/2 + y (wedge, g = 1) or
// p^2/2 + r^2/2 (harmonic, omega = 1).
inline double energy(const PhaseState& s, const TrapSpec& trap) {
  const double ke = 0.5 * (s.p.x() * s.p.x() + s.p.y() * s.p.y());
  if (trap.kind == TrapKind::Wedge) return ke + s.r.y();
  return ke + 0.5 * (s.r.x() * s.r.x() + s.r.y() * s.r.y());
}

inline bool inside_wedge(const Vec2& r, double tan_alpha, double slack = 0.0) {
  return r.y() >= -slack && std::abs(r.x()) <= r.y() * tan_alpha + slack;
}

// Earliest future crossing of either wall line |x| = y*tan(alpha) for a free
// parabola starting at `s`. Roots below `t_skip` are ignored so a state
// sitting exactly on a wall after a reflection is not re-collided instantly.
// Returns nullopt for apex-degenerate states with no future impact.
std::optional<WallEvent> next_wall_event(const PhaseState& s, double alpha,
                                         double t_skip = 1e-12);

// Specular reflection about the named wall; position unchanged. Throws if the
// state is farther than 1e-9 (units of l) from the wall line.
PhaseState reflect(const PhaseState& s, Wall wall, double alpha);

// Exact propagation by dt: closed-form rotation for the harmonic trap,
// ballistic parabola with event-timed wall reflections for the wedge.
PhaseState propagate(const PhaseState& s, const TrapSpec& trap, double dt);

namespace detail {

// Reflections with impact times below this are skipped (apex corner guard).
inline constexpr double kMinImpactDt = 1e-12;
inline constexpr double kApexEps = 1e-12;
inline constexpr int kMaxBouncesPerStep = 1000000;

// Wall crossing time for wall sign w (+1 right, -1 left), written in the
// mirror-canonical variables u = w*x, q = w*px so that the arithmetic for a
// mirrored state is bitwise identical:
//   (tan_a/2) s^2 + (q - tan_a*py) s + (u - tan_a*y) = 0.
// Uses the cancellation-safe quadratic form. Returns +inf if no root > t_skip.
inline double wall_crossing_time(double u, double y, double q, double py,
                                 double tan_a, double t_skip) {
  const double a = 0.5 * tan_a;
  const double b = q - tan_a * py;
  const double c = u - tan_a * y;
  const double disc = b * b - 4.0 * a * c;  // c <= 0 inside => disc >= 0
  if (disc < 0.0) return std::numeric_limits<double>::infinity();
  const double sq = std::sqrt(disc);
  const double qq = -0.5 * (b + std::copysign(sq, b));
  double best = std::numeric_limits<double>::infinity();
  if (qq != 0.0) {
    const double r = c / qq;
    if (r > t_skip) best = r;
  }
  if (a != 0.0) {
    const double r = qq / a;
    if (r > t_skip && r < best) best = r;
  }
  return best;
}

// Event-driven wedge stepper. Caches the time to the next wall impact so the
// engine's many small control-grid advances do not re-solve the quadratics.
struct WedgeStepper {
  Vec2 r{0.0, 0.0};
  Vec2 p{0.0, 0.0};
  double tan_a = 1.0;
  double cos_a = 0.0;
  double sin_a = 0.0;
  double tti = 0.0;  // time to next impact
  int wall_sign = 1;
  bool stuck = false;
  bool anomaly = false;

  void init(const PhaseState& s, const TrapSpec& trap) {
    r = s.r;
    p = s.p;
    tan_a = trap.tan_alpha;
    cos_a = trap.cos_alpha;
    sin_a = trap.sin_alpha;
    stuck = anomaly = false;
    recompute_event(kMinImpactDt);
  }

  void free_flight(double h) {
    r.x() += p.x() * h;
    r.y() += (p.y() - 0.5 * h) * h;
    p.y() -= h;
  }

  void freeze_at_apex() {
    r = Vec2{0.0, 0.0};
    p = Vec2{0.0, 0.0};
    stuck = true;
    anomaly = true;
    tti = std::numeric_limits<double>::infinity();
  }

  void recompute_event(double t_skip) {
    if (r.y() < kApexEps && p.norm() < kApexEps) {
      freeze_at_apex();
      return;
    }
    const double t_right =
        wall_crossing_time(r.x(), r.y(), p.x(), p.y(), tan_a, t_skip);
    const double t_left =
        wall_crossing_time(-r.x(), r.y(), -p.x(), p.y(), tan_a, t_skip);
    if (t_left < t_right) {
      tti = t_left;
      wall_sign = -1;
    } else {
      tti = t_right;
      wall_sign = 1;
    }
    if (!std::isfinite(tti)) freeze_at_apex();
  }

  void reflect_at_wall() {
    // Land exactly on the wall line, then mirror the normal velocity
    // component. n = (-w*cos_a, sin_a) is the inward wall normal.
    if (r.y() < -kApexEps) {
      freeze_at_apex();
      return;
    }
    r.x() = wall_sign * tan_a * r.y();
    const double vn = -wall_sign * cos_a * p.x() + sin_a * p.y();
    p.x() += 2.0 * vn * wall_sign * cos_a;
    p.y() -= 2.0 * vn * sin_a;
  }

  void advance(double dt) {
    int bounces = 0;
    while (dt > 0.0) {
      if (stuck) return;
      if (dt < tti) {
        free_flight(dt);
        tti -= dt;
        return;
      }
      const double h = tti;
      free_flight(h);
      dt -= h;
      reflect_at_wall();
      if (stuck) return;
      recompute_event(kMinImpactDt);
      if (++bounces >= kMaxBouncesPerStep) {  // numerical corner loop guard
        freeze_at_apex();
        return;
      }
    }
  }
};

// Exact phase-space rotation per axis; the rotation angle equals dt since
// omega = 1 in dimensionless units. Caches cos/sin for repeated step sizes.
struct HarmonicStepper {
  Vec2 r{0.0, 0.0};
  Vec2 p{0.0, 0.0};
  double cached_dt = -1.0;
  double c = 1.0;
  double s = 0.0;
  bool stuck = false;    // never set; mirrors WedgeStepper's interface
  bool anomaly = false;

  void init(const PhaseState& st, const TrapSpec&) {
    r = st.r;
    p = st.p;
    cached_dt = -1.0;
  }

  void advance(double dt) {
    if (dt != cached_dt) {
      cached_dt = dt;
      c = std::cos(dt);
      s = std::sin(dt);
    }
    const double x = r.x(), y = r.y(), px = p.x(), py = p.y();
    r.x() = c * x + s * px;
    p.x() = c * px - s * x;
    r.y() = c * y + s * py;
    p.y() = c * py - s * y;
  }
};

}  // namespace detail
}  // namespace boxsim
