#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dpr/eigensystem.hpp"
#include "dpr/hamiltonian.hpp"
#include "dpr/params.hpp"
#include "dpr/spin_state.hpp"

namespace dpr {

// Oscillating magnetic drive. chirp_rate = 0 gives a constant-frequency
// pulse; otherwise the instantaneous carrier is
// carrier_frequency + chirp_rate * t.
struct DrivePulse {
  double carrier_frequency = 0.0;  // Hz
  double rabi_frequency = 1e6;     // Hz
  double phase = 0.0;              // rad
  double duration = 0.0;           // s
  double chirp_rate = 0.0;         // Hz/s

  void validate() const {
    if (rabi_frequency < 0.0) throw ConfigError("DrivePulse: rabi_frequency < 0");
    if (duration < 0.0) throw ConfigError("DrivePulse: duration < 0");
  }
};

// Sampled unitary evolution: per-electron <Sz> trajectories and populations
// on the labeled electron eigenstates.
struct EvolutionRecord {
  std::vector<double> times;               // s
  std::vector<double> sz1;
  std::vector<double> sz2;
  std::vector<std::string> population_labels;
  Eigen::MatrixXd populations;             // n_times x 4
  SpinState final_state;
};

namespace detail {

inline Eigen::Matrix4cd sz_total() {
  Eigen::Vector4cd d;
  d << -1.0, 0.0, 0.0, 1.0;
  return d.asDiagonal();
}

inline Eigen::Matrix4cd sz_electron(int which) {
  Eigen::Vector4cd d;
  if (which == 1)
    d << -0.5, -0.5, 0.5, 0.5;
  else
    d << -0.5, 0.5, -0.5, 0.5;
  return d.asDiagonal();
}

// Collective drive f_R (cos(phi) Sx_tot + sin(phi) Sy_tot) in the rotating
// frame after the rotating-wave approximation.
inline Eigen::Matrix4cd drive_operator(double rabi, double phase) {
  Eigen::Matrix4cd sp = Eigen::Matrix4cd::Zero();  // S+_tot
  sp(1, 0) = 1.0;
  sp(2, 0) = 1.0;
  sp(3, 1) = 1.0;
  sp(3, 2) = 1.0;
  const Complex c = 0.5 * rabi * std::exp(Complex(0.0, -phase));
  Eigen::Matrix4cd h = c * sp;
  return h + h.adjoint().eval();
}

inline Eigen::Matrix4cd unitary_step(const Eigen::Matrix4cd& h, double dt) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
  Eigen::Vector4cd phases;
  for (int i = 0; i < 4; ++i)
    phases(i) = std::exp(Complex(0.0, -2.0 * M_PI * es.eigenvalues()(i) * dt));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline double max_dynamic_frequency(const DonorPairParams& p, NuclearConfig cfg,
                                    double rabi) {
  return std::max({rabi, p.j, std::abs(signed_detuning(p, cfg))});
}

}  // namespace detail

// Unitary evolution in the frame rotating at the instantaneous carrier,
// rotating-wave approximation applied (valid for f_R << gamma_e B0). The
// generator is held piecewise constant over each sample step and
// exponentiated exactly, so the norm is preserved unconditionally.
inline EvolutionRecord evolve(const SpinState& initial, const DrivePulse& pulse,
                              const DonorPairParams& p, NuclearConfig cfg,
                              double sample_step) {
  initial.check();
  pulse.validate();
  if (initial.dim() != 4) throw ContractError("evolve: expected a 4-dim electron state");
  if (sample_step <= 0.0) throw ConfigError("evolve: sample_step must be > 0");
  const double fmax = detail::max_dynamic_frequency(p, cfg, pulse.rabi_frequency);
  if (fmax > 0.0 && sample_step > 1.0 / (50.0 * fmax))
    throw NumericError("evolve: sample_step too coarse for the dynamics");

  const Eigen::Matrix4cd h0 = electron_hamiltonian(p, cfg);
  const Eigen::Matrix4cd szt = detail::sz_total();
  const Eigen::Matrix4cd hd =
      detail::drive_operator(pulse.rabi_frequency, pulse.phase);
  const EigenSystem basis = electron_eigensystem(p, cfg);

  const int n_steps = std::max(1, static_cast<int>(std::ceil(pulse.duration / sample_step)));
  const double dt = pulse.duration / n_steps;

  EvolutionRecord rec;
  rec.population_labels = basis.labels;
  rec.times.reserve(n_steps + 1);
  rec.populations.resize(n_steps + 1, 4);

  Eigen::Vector4cd psi = initial.amplitudes;
  Eigen::Matrix4cd u_const;
  const bool constant = pulse.chirp_rate == 0.0;
  if (constant && pulse.duration > 0.0) {
    const Eigen::Matrix4cd h = h0 - pulse.carrier_frequency * szt + hd;
    u_const = detail::unitary_step(h, dt);
  }

  auto record = [&](int k, double t) {
    rec.times.push_back(t);
    rec.sz1.push_back((psi.adjoint() * detail::sz_electron(1) * psi)(0).real());
    rec.sz2.push_back((psi.adjoint() * detail::sz_electron(2) * psi)(0).real());
    for (int s = 0; s < 4; ++s)
      rec.populations(k, s) = std::norm(basis.states.col(s).dot(psi));
  };

  record(0, 0.0);
  for (int k = 0; k < n_steps; ++k) {
    if (constant) {
      psi = u_const * psi;
    } else {
      const double t_mid = (k + 0.5) * dt;
      const double fc = pulse.carrier_frequency + pulse.chirp_rate * t_mid;
      psi = detail::unitary_step(h0 - fc * szt + hd, dt) * psi;
    }
    record(k + 1, (k + 1) * dt);
  }

  // Each step is exactly unitary; normalize away accumulated rounding.
  rec.final_state.amplitudes = psi.normalized();
  rec.final_state.basis = electron_basis_labels();
  return rec;
}

// Midpoint of the two alpha sub-transitions, (E(T+) - E(T-)) / 2.
inline double f_alpha_center(const DonorPairParams& p, NuclearConfig cfg) {
  if (!parallel(cfg))
    throw ContractError("f_alpha_center: requires a parallel nuclear configuration");
  const EigenSystem es = electron_eigensystem(p, cfg);
  return 0.5 * (es.energies(es.index_of("T+")) - es.energies(es.index_of("T-")));
}

namespace detail {

inline double t_plus_population(const DonorPairParams& p, NuclearConfig cfg,
                                double rabi, double duration) {
  DrivePulse pulse;
  pulse.carrier_frequency = f_alpha_center(p, cfg);
  pulse.rabi_frequency = rabi;
  pulse.duration = duration;
  const double step = 1.0 / (60.0 * max_dynamic_frequency(p, cfg, rabi));
  const EvolutionRecord rec = evolve(t_minus_state(), pulse, p, cfg, step);
  return rec.populations(rec.populations.rows() - 1,
                         electron_eigensystem(p, cfg).index_of("T+"));
}

}  // namespace detail

// Population-maximizing pi duration for the collective alpha drive,
// found numerically near the nominal 1/(2 f_R).
inline double calibrate_pi_duration(const DonorPairParams& p, NuclearConfig cfg,
                                    double rabi) {
  if (rabi <= 0.0) throw ConfigError("calibrate_pi_duration: rabi must be > 0");
  double lo = 0.6 / (2.0 * rabi);
  double hi = 1.4 / (2.0 * rabi);
  // Golden-section search; the T+ population is unimodal in this window.
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - gr * (hi - lo);
  double b = lo + gr * (hi - lo);
  double fa = detail::t_plus_population(p, cfg, rabi, a);
  double fb = detail::t_plus_population(p, cfg, rabi, b);
  for (int it = 0; it < 40 && (hi - lo) > 1e-6 / rabi; ++it) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + gr * (hi - lo);
      fb = detail::t_plus_population(p, cfg, rabi, b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - gr * (hi - lo);
      fa = detail::t_plus_population(p, cfg, rabi, a);
    }
  }
  return 0.5 * (lo + hi);
}

enum class PreparedState { Tminus, TX, Tplus };

// State preparation in the parallel nuclear regime: T- directly, T+ via a
// calibrated pi pulse at the alpha transition, TX via the pi/2 point.
inline SpinState prepare(PreparedState label, const DonorPairParams& p,
                         NuclearConfig cfg, double rabi = 1e6) {
  if (!parallel(cfg))
    throw ContractError("prepare: requires a parallel nuclear configuration");
  if (label == PreparedState::Tminus) return t_minus_state();
  DrivePulse pulse;
  pulse.carrier_frequency = f_alpha_center(p, cfg);
  pulse.rabi_frequency = rabi;
  const double t_pi = calibrate_pi_duration(p, cfg, rabi);
  pulse.duration = (label == PreparedState::Tplus) ? t_pi : 0.5 * t_pi;
  const double step = 1.0 / (60.0 * detail::max_dynamic_frequency(p, cfg, rabi));
  return evolve(t_minus_state(), pulse, p, cfg, step).final_state;
}

struct HardPulseResult {
  bool hard = false;
  double margin = 0.0;  // 2 f_R / splitting
};

// Hard-pulse criterion: the drive linewidth exceeds the alpha sub-transition
// splitting, 2 f_R > (f_alpha+ - f_alpha-). Strict inequality at the
// boundary.
inline HardPulseResult hard_pulse_check(double rabi, const DonorPairParams& p,
                                        NuclearConfig cfg) {
  if (!parallel(cfg))
    throw ContractError("hard_pulse_check: requires a parallel nuclear configuration");
  double fa_lo = 0.0, fa_hi = 0.0;
  for (const auto& line : esr_frequencies(p, cfg)) {
    if (line.label == "f_alpha-") fa_lo = line.frequency;
    if (line.label == "f_alpha+") fa_hi = line.frequency;
  }
  const double splitting = fa_hi - fa_lo;
  HardPulseResult r;
  r.margin = splitting > 0.0 ? 2.0 * rabi / splitting
                             : (rabi > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  r.hard = 2.0 * rabi > splitting && rabi > 0.0;
  return r;
}

// Linear-chirp adiabatic passage from center - span/2 to center + span/2.
// In the adiabatic limit (2 pi f_R^2 / rate >> 1) any resonance inside the
// sweep window is inverted; resonances outside are untouched.
inline SpinState adiabatic_invert(const SpinState& initial, double center,
                                  double span, double duration, double rabi,
                                  const DonorPairParams& p, NuclearConfig cfg) {
  if (span <= 0.0) throw ConfigError("adiabatic_invert: span must be > 0");
  if (duration <= 0.0) throw ConfigError("adiabatic_invert: duration must be > 0");
  DrivePulse pulse;
  pulse.carrier_frequency = center - 0.5 * span;
  pulse.rabi_frequency = rabi;
  pulse.duration = duration;
  pulse.chirp_rate = span / duration;
  const double fmax =
      std::max(detail::max_dynamic_frequency(p, cfg, rabi), 0.5 * span);
  const double step = std::min(1.0 / (50.0 * fmax), duration / 2000.0);
  return evolve(initial, pulse, p, cfg, step).final_state;
}

}  // namespace dpr
