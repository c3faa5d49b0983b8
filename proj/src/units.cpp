#include "boxsim/units.hpp"

#include <cmath>
#include <stdexcept>

namespace boxsim {

CharScales derive_scales(const PhysicalParams& params, TrapKind trap_kind) {
  if (!(params.mass > 0.0))
    throw std::invalid_argument("derive_scales: mass must be > 0");
  if (!(params.temperature_i > 0.0))
    throw std::invalid_argument("derive_scales: temperature_i must be > 0");

  const double kT = k_boltzmann * params.temperature_i;
  const double nu = std::sqrt(kT / params.mass);

  CharScales s;
  s.velocity = nu;
  s.energy = kT;
  s.momentum = params.mass * nu;
  switch (trap_kind) {
    case TrapKind::Wedge:
      if (!(params.gravity > 0.0))
        throw std::invalid_argument("derive_scales: wedge trap requires gravity > 0");
      s.length = kT / (params.mass * params.gravity);
      s.time = std::sqrt(kT / (params.mass * params.gravity * params.gravity));
      break;
    case TrapKind::Harmonic:
      if (!(params.omega > 0.0))
        throw std::invalid_argument("derive_scales: harmonic trap requires omega > 0");
      s.length = nu / params.omega;
      s.time = 1.0 / params.omega;
      break;
  }
  return s;
}

namespace {
double scale_of(Quantity q, const CharScales& s) {
  switch (q) {
    case Quantity::Length: return s.length;
    case Quantity::Velocity: return s.velocity;
    case Quantity::Time: return s.time;
    case Quantity::Energy: return s.energy;
    case Quantity::Momentum: return s.momentum;
  }
  return 1.0;
}
}  // namespace

double to_dimensionless(double value, Quantity q, const CharScales& scales) {
  return value / scale_of(q, scales);
}

double from_dimensionless(double value, Quantity q, const CharScales& scales) {
  return value * scale_of(q, scales);
}

}  // namespace boxsim
