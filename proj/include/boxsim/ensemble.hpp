#pragma once
#include <cstdint>
#include <random>
#include <utility>

#include "boxsim/dynamics.hpp"

namespace boxsim {

namespace rng {

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Per-trial seed: the trial_index-th output of a splitmix64 stream seeded at
// master_seed. Deterministic and order-independent, so trials can run on any
// worker in any order.
inline std::uint64_t trial_seed(std::uint64_t master_seed, std::int64_t trial_index) {
  return mix64(master_seed +
               0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(trial_index));
}

inline double u01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;  // [0, 1)
}

inline double exp1(std::mt19937_64& g) {
  return -std::log1p(-u01(g));  // Exp(1), u < 1 keeps the argument > -1
}

// Box-Muller pair of standard normals.
inline std::pair<double, double> gauss_pair(std::mt19937_64& g) {
  const double radius = std::sqrt(2.0 * exp1(g));
  const double theta = 2.0 * std::numbers::pi * u01(g);
  return {radius * std::cos(theta), radius * std::sin(theta)};
}

}  // namespace rng

// Initial-distribution mode for the wedge trap. Canonical is the phase-space
// canonical density (height marginal y e^{-y}, uniform x across the width).
// HeightBoltzmann draws the height from the plain Boltzmann factor e^{-y}
// with uniform x; the wedge figure presets use it. Harmonic sampling is the
// same in both modes.
enum class WedgeEnsemble { Canonical, HeightBoltzmann };

struct SamplerSpec {
  TrapSpec trap;
  double temperature_i = 100e-6;  // K; enters only through the scales
  std::uint64_t master_seed = 0xC0FFEE;
  WedgeEnsemble wedge_ensemble = WedgeEnsemble::Canonical;
};

// Draws one initial state from the dimensionless initial distribution:
// momenta are standard normals for both traps; wedge positions are
// y ~ Gamma(2,1) (canonical) or y ~ Exp(1) (height-Boltzmann) with x uniform
// on [-y tan(alpha), +y tan(alpha)]; harmonic positions are standard normals.
// The draw depends only on (master_seed, trial_index).
PhaseState sample_initial(const SamplerSpec& spec, std::int64_t trial_index);

// Area (units of l^2) of the trap-symmetric region holding probability
// mass 1 - epsilon: a truncated wedge or a centered disk.
double initial_area(const SamplerSpec& spec, double epsilon);

inline constexpr double kDefaultEpsilon = 0.01;

}  // namespace boxsim
