#pragma once

namespace dpr {

// CODATA 2018 values, SI units.
inline constexpr double kPlanck = 6.62607015e-34;         // J s
inline constexpr double kBoltzmann = 1.380649e-23;        // J/K
inline constexpr double kBohrMagneton = 9.2740100783e-24; // J/T

// Electron gyromagnetic ratio g*mu_B/h in Hz/T.
inline constexpr double electron_gyromagnetic(double g) {
  return g * kBohrMagneton / kPlanck;
}

}  // namespace dpr
