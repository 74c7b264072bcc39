#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dpr/config.hpp"
#include "dpr/drive.hpp"
#include "dpr/eigensystem.hpp"
#include "dpr/stats.hpp"
#include "dpr/trace.hpp"
#include "dpr/tunneling.hpp"

namespace dpr {

// Initial-state recipes usable from a config file. The pulsed recipes (t_x,
// t_plus) run the calibrated alpha drive and need parallel nuclei.
inline SpinState prepare_initial(const ExperimentConfig& cfg) {
  const std::string& name = cfg.initial_state;
  if (name == "t_minus" || name == "dd") return t_minus_state();
  if (name == "uu") return t_plus_state();
  if (name == "t_plus") return prepare(PreparedState::Tplus, cfg.donor, cfg.nuclear, cfg.pulse_rabi);
  if (name == "t_x") return prepare(PreparedState::TX, cfg.donor, cfg.nuclear, cfg.pulse_rabi);
  if (name == "s_tilde" || name == "t0_tilde" || name == "du" || name == "ud") {
    const std::string label = name == "s_tilde" ? "S~"
                              : name == "t0_tilde" ? "T0~"
                              : name == "du" ? "du~" : "ud~";
    for (const auto& [l, st] : analytic_electron_eigenstates(cfg.donor, cfg.nuclear))
      if (l == label) return st;
    throw ConfigError("initial state '" + name + "' is not available for nuclear orientation " +
                      to_string(cfg.nuclear));
  }
  throw ConfigError("unknown initial state '" + name + "'");
}

// Full readout experiment over one batch of repetitions.
struct ExperimentResult {
  SpinState initial;
  std::vector<EventTimeline> timelines;
  std::vector<int> counts;  // blips per repetition
  ReadoutStats stats;
};

namespace detail {

// Noise streams are salted so they never collide with trajectory streams
// derived from the same master seed.
constexpr std::uint64_t kNoiseSalt = 0x6e6f697365ull;  // "noise"

inline std::vector<int> count_detected(const std::vector<EventTimeline>& timelines,
                                       const ExperimentConfig& cfg) {
  std::vector<int> counts;
  counts.reserve(timelines.size());
  for (size_t i = 0; i < timelines.size(); ++i) {
    if (cfg.ideal_detection) {
      counts.push_back(timelines[i].ionization_count());
    } else {
      Rng noise = derive_stream(cfg.master_seed ^ kNoiseSalt, i);
      const CurrentTrace tr = synthesize_trace(timelines[i], cfg.trace, noise);
      counts.push_back(count_blips(tr, cfg.trace.threshold));
    }
  }
  return counts;
}

}  // namespace detail

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult res;
  res.initial = prepare_initial(cfg);
  res.timelines = run_batch(res.initial, cfg.repetitions, cfg.donor, cfg.tunneling,
                            cfg.nuclear, cfg.master_seed);
  res.counts = detail::count_detected(res.timelines, cfg);
  res.stats = subgroup_stats(res.counts, cfg.subgroup_size);
  return res;
}

// One readout batch after an adiabatic inversion sweep centered on a given
// carrier frequency.
struct SpectrumPoint {
  double frequency = 0.0;  // Hz, sweep center
  double spin_up_proportion = 0.0;
  double mean_blips = 0.0;
};

inline std::vector<double> spectrum_grid(const ExperimentConfig& cfg) {
  if (cfg.spectrum_points < 2)
    throw ConfigError("spectrum: points must be >= 2");
  double start = cfg.spectrum_start;
  double stop = cfg.spectrum_stop;
  if (start == 0.0 && stop == 0.0) {
    const auto lines = esr_frequencies(cfg.donor, cfg.nuclear);
    double lo = lines.front().frequency, hi = lines.front().frequency;
    for (const auto& l : lines) {
      lo = std::min(lo, l.frequency);
      hi = std::max(hi, l.frequency);
    }
    start = lo - 1.5 * cfg.chirp_span;
    stop = hi + 1.5 * cfg.chirp_span;
  }
  if (!(stop > start)) throw ConfigError("spectrum: stop must exceed start");
  std::vector<double> grid(cfg.spectrum_points);
  for (int i = 0; i < cfg.spectrum_points; ++i)
    grid[i] = start + (stop - start) * i / (cfg.spectrum_points - 1);
  return grid;
}

// Adiabatic-inversion spectrum: for each sweep center, invert whatever
// resonance falls inside the chirp window starting from the configured
// initial state, then read out and report the spin-up proportion.
inline std::vector<SpectrumPoint> spectrum_scan(const ExperimentConfig& cfg) {
  const std::vector<double> grid = spectrum_grid(cfg);
  const SpinState base = prepare_initial(cfg);
  std::vector<SpectrumPoint> out;
  out.reserve(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    const SpinState inverted =
        adiabatic_invert(base, grid[i], cfg.chirp_span, cfg.chirp_duration,
                         cfg.pulse_rabi, cfg.donor, cfg.nuclear);
    // Decohere the post-sweep state onto the eigenbasis inside run_batch's
    // projective branch; each grid point gets its own seed offset.
    const std::uint64_t seed = splitmix64(cfg.master_seed + 0x5350ull * (i + 1));
    const auto timelines = run_batch(inverted, cfg.repetitions, cfg.donor,
                                     cfg.tunneling, cfg.nuclear, seed);
    ExperimentConfig local = cfg;
    local.master_seed = seed;
    const std::vector<int> counts = detail::count_detected(timelines, local);
    SpectrumPoint pt;
    pt.frequency = grid[i];
    pt.spin_up_proportion = spin_up_proportion(counts);
    double sum = 0.0;
    for (int c : counts) sum += c;
    pt.mean_blips = sum / counts.size();
    out.push_back(pt);
  }
  return out;
}

// Threshold calibration targeting a given single-blip detection probability.
struct CalibrationResult {
  double target_probability = 0.0;
  double threshold_initial = 0.0;   // closed-form seed value
  double threshold = 0.0;           // refined by Monte Carlo bisection
  double achieved_probability = 0.0;
  int iterations = 0;
};

// A blip of duration d (exponential with rate gamma_in) drives the filtered
// current to i_off + (i_on - i_off)(1 - exp(-d / tau_f)); it is detected when
// that exceeds the threshold. Solving P(detect) = p for the noiseless chain
// gives the closed-form seed; Monte Carlo bisection on a fixed batch (common
// random numbers) then absorbs noise and multi-blip effects.
inline CalibrationResult calibrate_threshold(const ExperimentConfig& cfg,
                                             double target_p) {
  if (!(target_p > 0.0 && target_p < 1.0))
    throw ConfigError("calibrate: target probability must be in (0, 1)");
  if (cfg.ideal_detection)
    throw ConfigError("calibrate: ideal detection has no threshold to calibrate");
  CalibrationResult res;
  res.target_probability = target_p;

  const double tau_f = cfg.trace.filter_time_constant;
  const double d_min = -std::log(target_p) / cfg.tunneling.gamma_in;
  const double swing = cfg.trace.i_on - cfg.trace.i_off;
  double thr0 = cfg.trace.i_off + swing * (1.0 - std::exp(-d_min / tau_f));
  thr0 = std::clamp(thr0, cfg.trace.i_off + 1e-3 * swing, cfg.trace.i_on - 1e-3 * swing);
  res.threshold_initial = thr0;

  // Fixed batch of traces, reused at every candidate threshold.
  const SpinState initial = prepare_initial(cfg);
  const auto timelines = run_batch(initial, cfg.repetitions, cfg.donor,
                                   cfg.tunneling, cfg.nuclear, cfg.master_seed);
  std::vector<CurrentTrace> traces;
  traces.reserve(timelines.size());
  for (size_t i = 0; i < timelines.size(); ++i) {
    Rng noise = derive_stream(cfg.master_seed ^ detail::kNoiseSalt, i);
    traces.push_back(synthesize_trace(timelines[i], cfg.trace, noise));
  }
  auto detected_fraction = [&](double thr) {
    int up = 0;
    for (const auto& tr : traces)
      if (count_blips(tr, thr) >= 1) ++up;
    return static_cast<double>(up) / traces.size();
  };

  // detected_fraction is non-increasing in the threshold.
  double lo = cfg.trace.i_off + 1e-3 * swing;
  double hi = cfg.trace.i_on - 1e-3 * swing;
  double best = thr0;
  double best_err = std::abs(detected_fraction(thr0) - target_p);
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = detected_fraction(mid);
    ++res.iterations;
    const double err = std::abs(f - target_p);
    if (err < best_err) {
      best_err = err;
      best = mid;
    }
    if (f > target_p)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-6 * swing) break;
  }
  res.threshold = best;
  res.achieved_probability = detected_fraction(best);
  return res;
}

}  // namespace dpr
