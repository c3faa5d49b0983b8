#include "boxsim/ensemble.hpp"

#include <cmath>
#include <stdexcept>

namespace boxsim {

PhaseState sample_initial(const SamplerSpec& spec, std::int64_t trial_index) {
  if (trial_index < 0)
    throw std::invalid_argument("sample_initial: trial_index must be >= 0");
  std::mt19937_64 gen(rng::trial_seed(spec.master_seed, trial_index));
  PhaseState s;
  if (spec.trap.kind == TrapKind::Wedge) {
    // Gamma(2,1) as the sum of two unit exponentials; x | y uniform. The
    // height-Boltzmann mode keeps the draw count so trial streams line up
    // across modes.
    const double e1 = rng::exp1(gen);
    const double e2 = rng::exp1(gen);
    const double y =
        spec.wedge_ensemble == WedgeEnsemble::Canonical ? e1 + e2 : e1;
    const double x = y * spec.trap.tan_alpha * (2.0 * rng::u01(gen) - 1.0);
    s.r = Vec2{x, y};
  } else {
    auto [x, y] = rng::gauss_pair(gen);
    s.r = Vec2{x, y};
  }
  auto [px, py] = rng::gauss_pair(gen);
  s.p = Vec2{px, py};
  s.t = 0.0;
  return s;
}

namespace {

// Solves (1 + y) e^{-y} = eps for the wedge truncation height. Newton with a
// bisection bracket; the function is strictly decreasing on (0, inf).
double wedge_ymax(double eps) {
  double lo = 0.0, hi = 1.0;
  auto f = [&](double y) { return (1.0 + y) * std::exp(-y) - eps; };
  while (f(hi) > 0.0) hi *= 2.0;
  double y = 0.5 * (lo + hi);
  for (int i = 0; i < 200; ++i) {
    const double fy = f(y);
    if (fy > 0.0)
      lo = y;
    else
      hi = y;
    const double dfy = -y * std::exp(-y);
    double step = (dfy != 0.0) ? y - fy / dfy : 0.5 * (lo + hi);
    y = (step > lo && step < hi) ? step : 0.5 * (lo + hi);
    if (hi - lo < 1e-15 * (1.0 + hi)) break;
  }
  return y;
}

}  // namespace

double initial_area(const SamplerSpec& spec, double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw std::invalid_argument("initial_area: epsilon must be in (0, 1)");
  if (spec.trap.kind == TrapKind::Harmonic) {
    // P(x^2 + y^2 <= r^2) = 1 - exp(-r^2/2) for a standard 2D Gaussian.
    return -2.0 * std::numbers::pi * std::log(epsilon);
  }
  const double ymax = spec.wedge_ensemble == WedgeEnsemble::Canonical
                          ? wedge_ymax(epsilon)
                          : -std::log(epsilon);
  return ymax * ymax * spec.trap.tan_alpha;
}

}  // namespace boxsim
