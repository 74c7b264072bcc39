#pragma once

#include <cmath>
#include <string>

#include "dpr/constants.hpp"
#include "dpr/error.hpp"

namespace dpr {

// Physical constants of the two-donor system. All couplings in Hz, field in
// tesla. Defaults: g = 1.9985, mean hyperfine 117 MHz, hyperfine difference
// 90 kHz, exchange 10 MHz, 31P nuclear gyromagnetic ratio -17.23 MHz/T.
struct DonorPairParams {
  double b0 = 1.0;          // T
  double g1 = 1.9985;
  double g2 = 1.9985;
  double a1 = 117.045e6;    // Hz
  double a2 = 116.955e6;    // Hz
  double j = 10e6;          // Hz
  double gamma_n = -17.23e6;  // Hz/T

  double gamma_e1() const { return electron_gyromagnetic(g1); }
  double gamma_e2() const { return electron_gyromagnetic(g2); }
  double mean_hyperfine() const { return 0.5 * (a1 + a2); }
  double hyperfine_difference() const { return std::abs(a1 - a2); }

  void validate() const {
    const double fields[] = {b0, g1, g2, a1, a2, j, gamma_n};
    for (double v : fields) {
      if (!std::isfinite(v)) throw ConfigError("DonorPairParams: non-finite parameter");
    }
    if (b0 < 0.0) throw ConfigError("DonorPairParams: b0 must be >= 0");
    if (j < 0.0) throw ConfigError("DonorPairParams: j must be >= 0");
  }
};

// Orientation of the two donor nuclear spins. The nuclear configuration is
// an input parameter, fixed for the duration of any simulation.
enum class NuclearConfig { DownDown, DownUp, UpDown, UpUp };

inline bool parallel(NuclearConfig cfg) {
  return cfg == NuclearConfig::DownDown || cfg == NuclearConfig::UpUp;
}

inline std::string to_string(NuclearConfig cfg) {
  switch (cfg) {
    case NuclearConfig::DownDown: return "down_down";
    case NuclearConfig::DownUp: return "down_up";
    case NuclearConfig::UpDown: return "up_down";
    case NuclearConfig::UpUp: return "up_up";
  }
  return "?";
}

// Electron-electron frequency detuning |Delta|. Anti-parallel nuclei: the
// mean hyperfine (A1+A2)/2. Parallel nuclei: the hyperfine difference
// |A1-A2|.
inline double detuning(const DonorPairParams& p, NuclearConfig cfg) {
  return parallel(cfg) ? p.hyperfine_difference() : p.mean_hyperfine();
}

// Signed detuning f1 - f2 of the electron resonance frequencies, in the
// convention where |signed_detuning| == detuning() for equal g-factors.
// A g-factor difference adds (g1-g2)*muB/h*B0.
inline double signed_detuning(const DonorPairParams& p, NuclearConfig cfg) {
  const double dg = (p.gamma_e1() - p.gamma_e2()) * p.b0;
  switch (cfg) {
    case NuclearConfig::DownDown: return dg - (p.a1 - p.a2);
    case NuclearConfig::UpUp: return dg + (p.a1 - p.a2);
    case NuclearConfig::DownUp: return dg - 0.5 * (p.a1 + p.a2);
    case NuclearConfig::UpDown: return dg + 0.5 * (p.a1 + p.a2);
  }
  return dg;
}

// Eigenstate mixing angle, tan(2*theta) = j/|delta|, in [0, pi/4].
// delta = 0 with j > 0 is the singlet-triplet limit theta = pi/4.
inline double mixing_angle(double j, double delta) {
  if (j < 0.0) throw ContractError("mixing_angle: j must be >= 0");
  return 0.5 * std::atan2(j, std::abs(delta));
}

}  // namespace dpr
