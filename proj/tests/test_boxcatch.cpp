#include <doctest.h>

#include <cmath>
#include <random>

#include "boxsim/boxcatch.hpp"

using namespace boxsim;

TEST_SUITE_BEGIN("boxcatch");

namespace {
constexpr double kA30 = 30.0 * std::numbers::pi / 180.0;
constexpr double kA45 = 45.0 * std::numbers::pi / 180.0;

std::vector<BoxTrajectory> all_families() {
  return {
      RestTrajectory{0.2, 0.6},
      WedgeLinearTrajectory{0.06, 0.12, 0.7, 20.0},
      WedgeSideParallelTrajectory{0.13, 0.7, kA30, 0.35},
      WedgeAnalyticTrajectory{0.13, kA30, 0.35},
      WriggleTrajectory{2.0, 0.25, kA30, 40.0, 0.2},
      HarmonicLinearTrajectory{0.075, 0.55, 60.0},
      HarmonicAnalyticTrajectory{0.2, 60.0},
      HelixTrajectory{1.9, 0.1, 60.0},
  };
}
}  // namespace

TEST_CASE("wriggle endpoints: starts on the right wall, ends at w_B") {
  const WriggleTrajectory tr{2.0, 0.25, kA30, 40.0, 0.2};
  const Vec2 c0 = box_center(tr, 0.0);
  CHECK(c0.x() == doctest::Approx(2.0 * std::tan(kA30)).epsilon(1e-12));
  CHECK(c0.y() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(box_center(tr, 40.0).y() == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("harmonic linear crosses (0, y_c) at t_f/2") {
  const HarmonicLinearTrajectory tr{0.09, 0.55, 60.0};
  const Vec2 c = box_center(tr, 30.0);
  CHECK(c.x() == doctest::Approx(0.0));
  CHECK(c.y() == doctest::Approx(0.55));
}

TEST_CASE("wedge analytic formula and constant velocity") {
  const WedgeAnalyticTrajectory tr{0.11, kA45, 0.35};
  const Vec2 c = box_center(tr, 0.0);
  CHECK(c.x() == doctest::Approx(-0.35 * 2.0).epsilon(1e-12));
  CHECK(c.y() == doctest::Approx(0.0));
  const Vec2 v = box_velocity(tr, 7.7);
  CHECK(v.x() == doctest::Approx(0.11 * std::sin(kA45)).epsilon(1e-12));
  CHECK(v.y() == doctest::Approx(0.11 * std::cos(kA45)).epsilon(1e-12));
  CHECK(box_velocity(RestTrajectory{1.0, 2.0}, 3.0).norm() == 0.0);
}

TEST_CASE("box velocity matches a central difference for every family") {
  std::mt19937_64 gen(31);
  for (const BoxTrajectory& traj : all_families()) {
    const double t_f = std::min(trajectory_duration(traj), 20.0);
    std::uniform_real_distribution<double> ut(1e-3, t_f - 1e-3);
    for (int i = 0; i < 100; ++i) {
      const double t = ut(gen);
      const double h = 1e-6;
      const Vec2 fd = (box_center(traj, t + h) - box_center(traj, t - h)) / (2.0 * h);
      const Vec2 an = box_velocity(traj, t);
      CHECK(std::abs(fd.x() - an.x()) < 1e-6 * std::max(1.0, std::abs(an.x())));
      CHECK(std::abs(fd.y() - an.y()) < 1e-6 * std::max(1.0, std::abs(an.y())));
    }
  }
}

TEST_CASE("box_state rejects times outside the domain") {
  const HarmonicLinearTrajectory tr{0.09, 0.55, 60.0};
  CHECK_THROWS_AS(box_state(BoxTrajectory{tr}, -0.5), std::out_of_range);
  CHECK_THROWS_AS(box_state(BoxTrajectory{tr}, 60.5), std::out_of_range);
  // families without t_f accept any t >= 0
  CHECK_NOTHROW(box_state(BoxTrajectory{RestTrajectory{0.0, 1.0}}, 1e6));
}

TEST_CASE("try_catch edge cases") {
  BoxSpec box{0.35, 0.1, RestTrajectory{0.0, 0.6}};
  PhaseState s;
  s.r = Vec2{0.0, 0.6};
  s.p = Vec2{0.0, 0.0};
  CHECK(try_catch(s, box, 1.0) == CatchResult::Caught);

  // relative speed^2 exactly 2 E_B is not caught (strict threshold);
  // E_B = 0.125 makes the boundary speed 0.5 exactly representable
  BoxSpec tight{0.35, 0.125, RestTrajectory{0.0, 0.6}};
  s.p = Vec2{0.5, 0.0};
  CHECK(try_catch(s, tight, 1.0) == CatchResult::NotCaught);
  s.p = Vec2{0.5 - 1e-12, 0.0};
  CHECK(try_catch(s, tight, 1.0) == CatchResult::Caught);

  // outside by 1e-9 in x is never caught
  s.r = Vec2{box.half_width + 1e-9, 0.6};
  s.p = Vec2{0.0, 0.0};
  CHECK(try_catch(s, box, 1.0) == CatchResult::NotCaught);

  // a moving box compares against the relative velocity
  BoxSpec moving{0.35, 0.1, HarmonicLinearTrajectory{0.08, 0.6, 60.0}};
  PhaseState m;
  m.r = box_center(moving.trajectory, 30.0);
  m.p = Vec2{0.08, 0.0};
  CHECK(try_catch(m, moving, 30.0) == CatchResult::Caught);
}

TEST_CASE("wedge rest optimum seed formula") {
  CHECK(wedge_rest_optimum_seed(0.35, kA45) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(wedge_rest_optimum_seed(0.35, kA30) ==
        doctest::Approx(0.956217782649107).epsilon(1e-12));
  // alpha -> 90 deg collapses to w_B
  CHECK(wedge_rest_optimum_seed(0.2, 89.999 * std::numbers::pi / 180.0) ==
        doctest::Approx(0.2).epsilon(1e-4));
}

TEST_CASE("max_trajectory_speed bounds the published wriggle parameters") {
  // the figure parameter sets stay below 0.265 nu
  CHECK(max_trajectory_speed(WriggleTrajectory{2.0, 0.25, kA30, 40.0, 0.05}, 40.0) <
        kDefaultSpeedLimit);
  CHECK(max_trajectory_speed(WriggleTrajectory{1.5, 0.2, kA45, 40.0, 0.05}, 40.0) <
        kDefaultSpeedLimit);
  // a fast wriggle exceeds it
  CHECK(max_trajectory_speed(WriggleTrajectory{3.0, 1.0, kA45, 10.0, 0.05}, 10.0) >
        kDefaultSpeedLimit);
}

TEST_CASE("trajectory families expose stable names") {
  CHECK(std::string(trajectory_family(RestTrajectory{})) == "rest");
  CHECK(std::string(trajectory_family(HelixTrajectory{})) == "helix");
  CHECK(std::string(trajectory_family(WedgeAnalyticTrajectory{})) ==
        "wedge_analytic");
}

TEST_SUITE_END();
