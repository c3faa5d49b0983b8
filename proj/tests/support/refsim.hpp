#pragma once
// Independent reference simulator used only by tests. Fixed-step velocity
// Verlet with hard walls resolved by bisecting the in-step trajectory for the
// contact time (the steep-ramp limit), and catch checks at every step. Shares
// no propagation or event-finding code with the library engine.
#include <cstdint>

#include "boxsim/engine.hpp"

namespace refsim {

// Propagates for t_total with step h. Wedge walls are located by bisection on
// the sign of the wall functions and reflected in the wall frame.
boxsim::PhaseState integrate(const boxsim::PhaseState& start,
                             const boxsim::TrapSpec& trap, double t_total,
                             double h);

struct RefOutcome {
  bool caught = false;
  double catch_time = 0.0;
};

// One full reference trial: same sampler as the engine, catch test evaluated
// at t = 0 and after every integrator step.
RefOutcome run_trial(const boxsim::RunSpec& spec, std::int64_t trial_index,
                     double h);

// Reference F over [0, n_trials) at step h.
boxsim::FractionEstimate run_ensemble(const boxsim::RunSpec& spec, double h);

}  // namespace refsim
