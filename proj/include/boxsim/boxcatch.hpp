#pragma once
#include <cmath>
#include <limits>
#include <string>
#include <variant>

#include "boxsim/dynamics.hpp"

namespace boxsim {

// Box trajectory families. All fields are dimensionless (lengths in l,
// velocities in nu, times in tau). Families whose center formula involves the
// box half width carry their own w_B copy; the config layer binds it to the
// box block's w_B.

struct RestTrajectory {
  double x_B = 0.0;
  double y_B = 0.0;
};

// x_B(t) = v_Bx (t - t_f/2), y_B(t) = v_By (t - t_f/2) + y_op
struct WedgeLinearTrajectory {
  double v_Bx = 0.0;
  double v_By = 0.0;
  double y_op = 0.0;
  double t_f = 0.0;
};

// Moves parallel to the right wedge side, starting just outside the trap and
// crossing the y axis at y_op:
//   x_B(t) = v sin(a) t - (w_B + (w_B + y_op) tan(a)) / 2
//   y_B(t) = v cos(a) t - (w_B - y_op + w_B cot(a)) / 2
struct WedgeSideParallelTrajectory {
  double v = 0.0;
  double y_op = 0.0;
  double alpha = 0.0;
  double w_B = 0.0;
};

// Wall-parallel motion that touches the wedge side with its lower-right
// corner; the y-axis crossing height w_B (1 + tan a)/tan a is built in:
//   x_B(t) = v sin(a) t - w_B (1 + tan(a)),  y_B(t) = v cos(a) t
struct WedgeAnalyticTrajectory {
  double v = 0.0;
  double alpha = 0.0;
  double w_B = 0.0;
};

// Starts on the right wall at height y_W0, descends to w_B while oscillating
// between the walls:
//   y_B(t) = y_W0 + (w_B - y_W0) t/t_f,  x_B(t) = y_B(t) tan(a) cos(w_W t)
struct WriggleTrajectory {
  double y_W0 = 0.0;
  double omega_W = 0.0;
  double alpha = 0.0;
  double t_f = 0.0;
  double w_B = 0.0;
};

// x_B(t) = v_Bx (t - t_f/2), y_B(t) = y_c
struct HarmonicLinearTrajectory {
  double v_Bx = 0.0;
  double y_c = 0.0;
  double t_f = 0.0;
};

// Linear harmonic trajectory with the fitted optimum built in:
//   x_B(t) = (0.025 + 0.25 w_B)(t - t_f/2),  y_B(t) = 0.55
struct HarmonicAnalyticTrajectory {
  double w_B = 0.0;
  double t_f = 0.0;
};

// Spiral into the origin:
//   x_B(t) = x_H (1 - t/t_f) cos(w_H t),  y_B(t) = x_H (1 - t/t_f) sin(w_H t)
struct HelixTrajectory {
  double x_H = 0.0;
  double omega_H = 0.0;
  double t_f = 0.0;
};

using BoxTrajectory =
    std::variant<RestTrajectory, WedgeLinearTrajectory,
                 WedgeSideParallelTrajectory, WedgeAnalyticTrajectory,
                 WriggleTrajectory, HarmonicLinearTrajectory,
                 HarmonicAnalyticTrajectory, HelixTrajectory>;

struct BoxState {
  Vec2 center{0.0, 0.0};
  Vec2 velocity{0.0, 0.0};
};

namespace detail {

inline BoxState eval_box(const RestTrajectory& tr, double) {
  return {Vec2{tr.x_B, tr.y_B}, Vec2{0.0, 0.0}};
}
inline BoxState eval_box(const WedgeLinearTrajectory& tr, double t) {
  const double u = t - 0.5 * tr.t_f;
  return {Vec2{tr.v_Bx * u, tr.v_By * u + tr.y_op}, Vec2{tr.v_Bx, tr.v_By}};
}
inline BoxState eval_box(const WedgeSideParallelTrajectory& tr, double t) {
  const double ta = std::tan(tr.alpha);
  const double vx = tr.v * std::sin(tr.alpha);
  const double vy = tr.v * std::cos(tr.alpha);
  return {Vec2{vx * t - 0.5 * (tr.w_B + (tr.w_B + tr.y_op) * ta),
               vy * t - 0.5 * (tr.w_B - tr.y_op + tr.w_B / ta)},
          Vec2{vx, vy}};
}
inline BoxState eval_box(const WedgeAnalyticTrajectory& tr, double t) {
  const double vx = tr.v * std::sin(tr.alpha);
  const double vy = tr.v * std::cos(tr.alpha);
  return {Vec2{vx * t - tr.w_B * (1.0 + std::tan(tr.alpha)), vy * t},
          Vec2{vx, vy}};
}
inline BoxState eval_box(const WriggleTrajectory& tr, double t) {
  const double ta = std::tan(tr.alpha);
  const double ydot = (tr.w_B - tr.y_W0) / tr.t_f;
  const double y = tr.y_W0 + ydot * t;
  const double c = std::cos(tr.omega_W * t);
  const double s = std::sin(tr.omega_W * t);
  return {Vec2{y * ta * c, y},
          Vec2{ydot * ta * c - y * ta * tr.omega_W * s, ydot}};
}
inline BoxState eval_box(const HarmonicLinearTrajectory& tr, double t) {
  return {Vec2{tr.v_Bx * (t - 0.5 * tr.t_f), tr.y_c}, Vec2{tr.v_Bx, 0.0}};
}
inline BoxState eval_box(const HarmonicAnalyticTrajectory& tr, double t) {
  const double v = 0.025 + 0.25 * tr.w_B;
  return {Vec2{v * (t - 0.5 * tr.t_f), 0.55}, Vec2{v, 0.0}};
}
inline BoxState eval_box(const HelixTrajectory& tr, double t) {
  const double a = tr.x_H * (1.0 - t / tr.t_f);
  const double adot = -tr.x_H / tr.t_f;
  const double c = std::cos(tr.omega_H * t);
  const double s = std::sin(tr.omega_H * t);
  return {Vec2{a * c, a * s},
          Vec2{adot * c - a * tr.omega_H * s, adot * s + a * tr.omega_H * c}};
}

}  // namespace detail

// Duration of the parametrization, +inf for families defined for all t >= 0.
double trajectory_duration(const BoxTrajectory& traj);

const char* trajectory_family(const BoxTrajectory& traj);

// Center and velocity at time t in one evaluation. Throws std::out_of_range
// outside [0, t_f] (with a small endpoint tolerance).
BoxState box_state(const BoxTrajectory& traj, double t);

inline Vec2 box_center(const BoxTrajectory& traj, double t) {
  return box_state(traj, t).center;
}
inline Vec2 box_velocity(const BoxTrajectory& traj, double t) {
  return box_state(traj, t).velocity;
}

// Fast path used by the engine: no range validation.
inline BoxState box_state_unchecked(const BoxTrajectory& traj, double t) {
  return std::visit([t](const auto& tr) { return detail::eval_box(tr, t); },
                    traj);
}

struct BoxSpec {
  double half_width = 0.0;  // w_B, units of l
  double threshold = 0.0;   // E_B, units of E_i
  BoxTrajectory trajectory = RestTrajectory{};
};

// The catch rule: strictly inside the square and relative kinetic energy
// strictly below the threshold. Boundary ties are NotCaught.
inline bool catch_predicate(const Vec2& r, const Vec2& p, const Vec2& center,
                            const Vec2& box_vel, double w_B, double E_B) {
  if (!(std::abs(r.x() - center.x()) < w_B)) return false;
  if (!(std::abs(r.y() - center.y()) < w_B)) return false;
  const double dvx = p.x() - box_vel.x();
  const double dvy = p.y() - box_vel.y();
  return 0.5 * (dvx * dvx + dvy * dvy) < E_B;
}

enum class CatchResult { NotCaught, Caught };

CatchResult try_catch(const PhaseState& s, const BoxSpec& box, double t);

// Corner-touching height for a resting box: y_op = w_B (1 + tan a)/tan a.
inline double wedge_rest_optimum_seed(double w_B, double alpha) {
  const double ta = std::tan(alpha);
  return w_B * (1.0 + ta) / ta;
}

// Max |center'(t)| on a uniform grid; used to enforce the wriggle speed cap.
double max_trajectory_speed(const BoxTrajectory& traj, double t_final,
                            int n_grid = 1000);

inline constexpr double kDefaultSpeedLimit = 0.265;  // units of nu

}  // namespace boxsim
