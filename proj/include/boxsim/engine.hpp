#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "boxsim/boxcatch.hpp"
#include "boxsim/ensemble.hpp"

namespace boxsim {

struct RunSpec {
  TrapSpec trap;
  BoxSpec box;
  SamplerSpec sampler;
  std::int64_t n_trials = 100000;
  double t_final = 20.0;         // units of tau
  double check_interval = 0.01;  // units of tau
};

// Throws std::invalid_argument describing the first violated field.
void validate_run_spec(const RunSpec& spec);

struct TrialOutcome {
  bool caught = false;
  double catch_time = 0.0;  // valid only when caught
  bool anomaly = false;     // stuck-at-apex or degenerate event solve
};

struct CatchHistogram {
  double t_max = 0.0;
  std::array<std::int64_t, 50> bins{};
};

struct FractionEstimate {
  std::int64_t n_caught = 0;
  std::int64_t n_trials = 0;
  double fraction = 0.0;
  double std_error = 0.0;  // sqrt(F(1-F)/N)
  std::int64_t n_anomalies = 0;
  std::optional<CatchHistogram> catch_times;
};

FractionEstimate make_fraction_estimate(std::int64_t n_caught,
                                        std::int64_t n_trials);

struct EnsembleOptions {
  int n_workers = 0;  // 0 = hardware concurrency
  bool record_histogram = false;
};

// One Monte Carlo trial: sample the initial state, alternate exact
// propagation with catch checks on the control grid (t = 0 included) until
// caught or t >= t_final. Pure function of (spec, trial_index).
TrialOutcome run_trial(const RunSpec& spec, std::int64_t trial_index);

// All trials aggregated. Bitwise-identical result for any worker count.
FractionEstimate run_ensemble(const RunSpec& spec,
                              const EnsembleOptions& opts = {});

// Evaluates many boxes against the same trial set in one pass. All boxes must
// share the base box's half width and have center trajectories that differ
// from it only by a constant offset (identical velocity profile); this holds
// for grids over x_B, y_B, y_op, y_c and E_B. The shared check-time grid and
// trial set make this common-random-numbers evaluation; the base box's result
// is bitwise identical to run_ensemble(base). Throws std::invalid_argument if
// the boxes are not offset-compatible.
std::vector<FractionEstimate> run_ensemble_multi(
    const RunSpec& base, std::span<const BoxSpec> boxes,
    const EnsembleOptions& opts = {});

namespace detail {

// Necessary-condition energy window for capture: an atom whose conserved
// dimensionless energy H lies outside (lower, upper) can never satisfy the
// catch rule anywhere along the box path, so its trial is decided without
// propagation. Derivation: capture at time t needs the atom inside the box
// (so V(r) is within the box's potential range at t) with relative kinetic
// energy below E_B (so |p| < |v_B(t)| + sqrt(2 E_B)).
struct EnergyBounds {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

EnergyBounds catch_energy_bounds(const TrapSpec& trap, const BoxSpec& box,
                                 double t_final);

}  // namespace detail

}  // namespace boxsim
