#pragma once
#include <numbers>

namespace boxsim {

// CODATA value, exact by SI definition.
inline constexpr double k_boltzmann = 1.380649e-23;  // J/K
inline constexpr double mass_rb87 = 1.44316e-25;     // kg

enum class TrapKind { Wedge, Harmonic };

// Physical inputs at the configuration boundary. Everything downstream of
// derive_scales() works in dimensionless units.
struct PhysicalParams {
  double mass = mass_rb87;                       // kg
  double temperature_i = 100e-6;                 // K
  double gravity = 9.78;                         // m/s^2, wedge only
  double omega = 2.0 * std::numbers::pi * 50.0;  // rad/s, harmonic only
};

// Characteristic scales of a trap:
//   wedge:    l = kT/(mg),          nu = sqrt(kT/m), tau = sqrt(kT/(m g^2))
//   harmonic: l = sqrt(kT/m)/omega, nu = sqrt(kT/m), tau = 1/omega
// Both satisfy l = nu * tau. energy is E_i = k_B T_i, momentum is m*nu.
struct CharScales {
  double length = 0;
  double velocity = 0;
  double time = 0;
  double energy = 0;
  double momentum = 0;
};

// Throws std::invalid_argument when a parameter required by trap_kind is
// missing or non-positive.
CharScales derive_scales(const PhysicalParams& params, TrapKind trap_kind);

enum class Quantity { Length, Velocity, Time, Energy, Momentum };

double to_dimensionless(double value, Quantity q, const CharScales& scales);
double from_dimensionless(double value, Quantity q, const CharScales& scales);

}  // namespace boxsim
