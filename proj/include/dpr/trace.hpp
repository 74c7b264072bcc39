#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "dpr/error.hpp"
#include "dpr/rng.hpp"
#include "dpr/tunneling.hpp"

namespace dpr {

// Detection-chain forward model: square-wave SET current, first-order
// low-pass filter, additive white Gaussian noise, fixed threshold. The
// default filter time constant reproduces a 10-90% rise time of 6.7 us
// (t_r = ln 9 * tau_f), i.e. a bandwidth of 0.35 / t_r ~ 52 kHz.
struct TraceParams {
  double sample_rate = 1e6;                    // Hz
  double i_off = 0.0;                          // current units
  double i_on = 1.0;
  double filter_time_constant = 6.7e-6 / std::log(9.0);  // s
  double noise_sigma = 0.1;                    // per sample, after the filter
  double threshold = 0.5;

  void validate() const {
    if (!(sample_rate > 0.0)) throw ConfigError("TraceParams: sample_rate must be > 0");
    if (!(i_on > i_off)) throw ConfigError("TraceParams: i_on must exceed i_off");
    if (filter_time_constant < 0.0)
      throw ConfigError("TraceParams: filter_time_constant must be >= 0");
    if (noise_sigma < 0.0) throw ConfigError("TraceParams: noise_sigma must be >= 0");
    if (!(threshold > i_off && threshold < i_on))
      throw ConfigError("TraceParams: threshold must lie strictly between i_off and i_on");
  }

  std::uint64_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](double v) {
      std::uint64_t bits;
      static_assert(sizeof(bits) == sizeof(v));
      std::memcpy(&bits, &v, sizeof(bits));
      h = splitmix64(h ^ bits);
    };
    mix(sample_rate);
    mix(i_off);
    mix(i_on);
    mix(filter_time_constant);
    mix(noise_sigma);
    mix(threshold);
    return h;
  }
};

// Uniformly sampled SET current signal.
struct CurrentTrace {
  std::vector<float> samples;
  double sample_rate = 0.0;
  std::uint64_t timeline_seed = 0;
  std::uint64_t params_hash = 0;

  double duration() const { return samples.size() / sample_rate; }
};

// A detected supra-threshold interval.
struct BlipRecord {
  double start_time = 0.0;  // s
  double duration = 0.0;    // s
  double peak = 0.0;        // current units
};

// Ideal square wave (i_on while donor 1 is ionized) through a first-order
// low-pass filter, plus independent Gaussian noise per sample. Event times
// enter through the fractional ionized occupancy of each sample interval.
inline CurrentTrace synthesize_trace(const EventTimeline& timeline,
                                     const TraceParams& tp, Rng& rng) {
  tp.validate();
  if (timeline.read_duration <= 0.0)
    throw ContractError("synthesize_trace: timeline has no read duration");
  const int n = static_cast<int>(std::lround(timeline.read_duration * tp.sample_rate));
  const double dt = 1.0 / tp.sample_rate;

  // Ionized fraction of each sample interval.
  std::vector<double> occ(n, 0.0);
  bool ionized = false;
  double t_prev = 0.0;
  auto accumulate = [&](double t0, double t1) {
    if (t1 <= t0) return;
    const int k0 = std::max(0, static_cast<int>(t0 / dt));
    const int k1 = std::min(n - 1, static_cast<int>(t1 / dt));
    for (int k = k0; k <= k1; ++k) {
      const double lo = std::max(t0, k * dt);
      const double hi = std::min(t1, (k + 1) * dt);
      if (hi > lo) occ[k] += (hi - lo) / dt;
    }
  };
  for (const auto& ev : timeline.events) {
    if (ionized) accumulate(t_prev, ev.time);
    ionized = ev.kind == EventKind::IonizeDonor1;
    t_prev = ev.time;
  }
  if (ionized) accumulate(t_prev, timeline.read_duration);

  CurrentTrace tr;
  tr.sample_rate = tp.sample_rate;
  tr.timeline_seed = timeline.seed;
  tr.params_hash = tp.hash();
  tr.samples.resize(n);
  const double alpha =
      tp.filter_time_constant > 0.0 ? 1.0 - std::exp(-dt / tp.filter_time_constant) : 1.0;
  double y = tp.i_off;
  for (int k = 0; k < n; ++k) {
    const double x = tp.i_off + (tp.i_on - tp.i_off) * occ[k];
    y += alpha * (x - y);
    double v = y;
    if (tp.noise_sigma > 0.0) v += tp.noise_sigma * rng.normal();
    tr.samples[k] = static_cast<float>(v);
  }
  return tr;
}

// Maximal contiguous supra-threshold runs.
inline std::vector<BlipRecord> detect_blips(const CurrentTrace& trace,
                                            double threshold) {
  std::vector<BlipRecord> out;
  const double dt = 1.0 / trace.sample_rate;
  int start = -1;
  double peak = 0.0;
  for (int k = 0; k <= static_cast<int>(trace.samples.size()); ++k) {
    const bool above = k < static_cast<int>(trace.samples.size()) &&
                       trace.samples[k] > threshold;
    if (above) {
      if (start < 0) {
        start = k;
        peak = trace.samples[k];
      } else {
        peak = std::max(peak, static_cast<double>(trace.samples[k]));
      }
    } else if (start >= 0) {
      out.push_back({start * dt, (k - start) * dt, peak});
      start = -1;
    }
  }
  return out;
}

inline int count_blips(const CurrentTrace& trace, double threshold) {
  return static_cast<int>(detect_blips(trace, threshold).size());
}

// 10-90% rise time of a saturated blip, interpolated between samples. The
// blip must be long enough for the filtered level to saturate.
inline double rise_time(const CurrentTrace& trace, const BlipRecord& blip,
                        const TraceParams& tp) {
  if (blip.duration <= 5.0 * tp.filter_time_constant)
    throw NumericError("rise_time: blip too short to saturate the filter");
  const double dt = 1.0 / trace.sample_rate;
  const int k_start = static_cast<int>(std::lround(blip.start_time * trace.sample_rate));
  const int k_end = std::min(static_cast<int>(trace.samples.size()) - 1,
                             k_start + static_cast<int>(std::lround(blip.duration * trace.sample_rate)));
  // Peak within the blip.
  int k_peak = k_start;
  for (int k = k_start; k <= k_end; ++k)
    if (trace.samples[k] > trace.samples[k_peak]) k_peak = k;
  const double peak = trace.samples[k_peak];
  const double lo = tp.i_off + 0.1 * (peak - tp.i_off);
  const double hi = tp.i_off + 0.9 * (peak - tp.i_off);

  auto crossing_before = [&](int from, double level) {
    for (int k = from; k > 0; --k) {
      const double a = trace.samples[k - 1];
      const double b = trace.samples[k];
      if (a <= level && b > level)
        return (k - 1 + (level - a) / (b - a)) * dt;
    }
    return 0.0;
  };
  const double t90 = crossing_before(k_peak, hi);
  const double t10 = crossing_before(k_peak, lo);
  return t90 - t10;
}

}  // namespace dpr
