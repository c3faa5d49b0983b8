#include "boxsim/boxcatch.hpp"

#include <algorithm>
#include <stdexcept>

namespace boxsim {

namespace {

template <class T>
struct always_false : std::false_type {};

template <class Tr>
double duration_of(const Tr& tr) {
  if constexpr (requires { tr.t_f; })
    return tr.t_f;
  else
    return std::numeric_limits<double>::infinity();
}

}  // namespace

double trajectory_duration(const BoxTrajectory& traj) {
  return std::visit([](const auto& tr) { return duration_of(tr); }, traj);
}

const char* trajectory_family(const BoxTrajectory& traj) {
  return std::visit(
      [](const auto& tr) -> const char* {
        using T = std::decay_t<decltype(tr)>;
        if constexpr (std::is_same_v<T, RestTrajectory>) return "rest";
        else if constexpr (std::is_same_v<T, WedgeLinearTrajectory>) return "wedge_linear";
        else if constexpr (std::is_same_v<T, WedgeSideParallelTrajectory>) return "wedge_side_parallel";
        else if constexpr (std::is_same_v<T, WedgeAnalyticTrajectory>) return "wedge_analytic";
        else if constexpr (std::is_same_v<T, WriggleTrajectory>) return "wriggle";
        else if constexpr (std::is_same_v<T, HarmonicLinearTrajectory>) return "harmonic_linear";
        else if constexpr (std::is_same_v<T, HarmonicAnalyticTrajectory>) return "harmonic_analytic";
        else if constexpr (std::is_same_v<T, HelixTrajectory>) return "helix";
        else static_assert(always_false<T>::value);
      },
      traj);
}

BoxState box_state(const BoxTrajectory& traj, double t) {
  const double t_f = trajectory_duration(traj);
  const double tol = 1e-9 * (1.0 + std::abs(t));
  if (t < -tol || t > t_f + tol)
    throw std::out_of_range("box_state: t outside the trajectory domain [0, t_f]");
  return box_state_unchecked(traj, t);
}

CatchResult try_catch(const PhaseState& s, const BoxSpec& box, double t) {
  const BoxState bs = box_state(box.trajectory, t);
  return catch_predicate(s.r, s.p, bs.center, bs.velocity, box.half_width,
                         box.threshold)
             ? CatchResult::Caught
             : CatchResult::NotCaught;
}

double max_trajectory_speed(const BoxTrajectory& traj, double t_final,
                            int n_grid) {
  if (n_grid < 2) throw std::invalid_argument("max_trajectory_speed: n_grid < 2");
  const double horizon = std::min(t_final, trajectory_duration(traj));
  double vmax = 0.0;
  for (int i = 0; i <= n_grid; ++i) {
    const double t = horizon * static_cast<double>(i) / n_grid;
    vmax = std::max(vmax, box_state_unchecked(traj, t).velocity.norm());
  }
  return vmax;
}

}  // namespace boxsim
