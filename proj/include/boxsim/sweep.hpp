#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "boxsim/engine.hpp"

namespace boxsim {

// Sets/reads one numeric field of the BoxSpec or its trajectory by name.
// Valid names: w_B, E_B and the trajectory fields x_B, y_B, v_Bx, v_By, y_op,
// t_f, v, alpha, y_W0, omega_W, y_c, x_H, omega_H. Setting w_B also updates
// the bound w_B copy of families whose center formula uses it. Throws
// std::invalid_argument for names the current trajectory does not have.
void set_param(RunSpec& spec, const std::string& name, double value);
double get_param(const RunSpec& spec, const std::string& name);

struct AxisSpec {
  std::string param;
  std::vector<double> grid;  // finite, ascending, non-empty
};

struct SweepSpec {
  RunSpec base;
  std::vector<AxisSpec> axes;
  int refine_rounds = 0;
  // Evaluated grid points x n_trials across all rounds must stay below this.
  std::int64_t max_budget = 10'000'000'000;
  // Max |box velocity| accepted for wriggle trajectories (units of nu).
  double wriggle_speed_limit = kDefaultSpeedLimit;
};

struct GridPointResult {
  std::vector<double> values;  // one per axis, axis order
  FractionEstimate est;
  int round = 0;  // refinement round that first evaluated the point
};

struct AxisErrorBar {
  double lo = 0.0;
  double hi = 0.0;
};

struct RoundTrace {
  std::vector<AxisSpec> axes;
  std::vector<double> argmax_values;
  std::vector<AxisErrorBar> error_bars;
  double f_max = 0.0;
};

struct SweepResult {
  std::vector<AxisSpec> axes;            // final-round axes
  std::vector<GridPointResult> grid;     // final round, row-major (last axis fastest)
  std::size_t argmax = 0;                // index into grid
  std::vector<double> argmax_values;
  FractionEstimate best;
  double f_max = 0.0;
  // Per axis: the contiguous parameter range around the argmax over which
  // F >= F_max - 1/sqrt(n_trials).
  std::vector<AxisErrorBar> error_bars;
  std::int64_t n_trials = 0;
  std::vector<RoundTrace> rounds;
  // Every unique point evaluated across rounds, in evaluation order.
  std::vector<GridPointResult> evaluated;
};

// Grid scan with common random numbers (every point sees the same trials),
// plus refine_rounds of local refinement: each round halves the grid spacing
// around the current argmax. Offset-compatible points (grids over x_B, y_B,
// y_op, y_c, E_B at fixed velocity parameters) are evaluated in shared passes.
SweepResult scan(const SweepSpec& spec, const EnsembleOptions& opts = {});

// scan() restricted to 2D velocity/position optimization of a linear-motion
// trajectory; requires WedgeLinear or HarmonicLinear and exactly two axes over
// v_Bx, v_By or y_c.
SweepResult optimize_2d_velocity(const SweepSpec& spec,
                                 const EnsembleOptions& opts = {});

struct CoolingReport {
  double fraction = 0.0;
  double area_initial = 0.0;    // A_i, units of l^2
  double area_box = 0.0;        // A_B = 4 w_B^2
  double threshold_ratio = 0.0; // E_B / E_i
  double epsilon = 0.0;
  double eta = 0.0;             // log10(F * (A_i/A_B) * (E_i/E_B)); -inf for F = 0
};

CoolingReport cooling_efficiency(const FractionEstimate& est, const BoxSpec& box,
                                 const SamplerSpec& sampler, double epsilon);

struct TrajectoryComparison {
  struct Row {
    std::string family;
    FractionEstimate est;
    // |F - F_best| > 3 sqrt(se^2 + se_best^2); always false for the best row.
    bool significant_vs_best = false;
  };
  std::vector<Row> rows;  // sorted by F, descending
};

// Runs each spec (all must share trap, w_B, E_B, t_final and seeds) and ranks
// the trajectories.
TrajectoryComparison compare_trajectories(const std::vector<RunSpec>& specs,
                                          const EnsembleOptions& opts = {});

}  // namespace boxsim
