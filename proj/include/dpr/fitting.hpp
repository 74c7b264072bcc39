#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dpr/error.hpp"

namespace dpr {

struct TunnelTimeFit {
  double tau = 0.0;        // s
  double sigma_tau = 0.0;  // 1-sigma standard error
  int bins_used = 0;
};

// Exponential decay time from a histogram of blip durations. Bins centered
// below `min_duration_cut` are excluded (durations below the detection
// bandwidth are not accurately determined), then the log counts of the
// non-empty retained bins are fit by weighted least squares with weight
// equal to the count.
inline TunnelTimeFit fit_tunnel_in_time(const std::vector<double>& durations,
                                        double bin_width,
                                        double min_duration_cut) {
  if (!(bin_width > 0.0)) throw ConfigError("fit_tunnel_in_time: bin_width must be > 0");
  if (min_duration_cut < 0.0)
    throw ConfigError("fit_tunnel_in_time: min_duration_cut must be >= 0");
  int n_above = 0;
  double d_max = 0.0;
  for (double d : durations) {
    if (d < 0.0) throw ContractError("fit_tunnel_in_time: negative duration");
    if (d >= min_duration_cut) ++n_above;
    d_max = std::max(d_max, d);
  }
  if (n_above < 50)
    throw NumericError("fit_tunnel_in_time: need at least 50 durations above the cut");
  const auto [lo, hi] = std::minmax_element(durations.begin(), durations.end());
  if (*hi - *lo <= 0.0)
    throw NumericError("fit_tunnel_in_time: degenerate (zero-variance) durations");

  const int n_bins = static_cast<int>(d_max / bin_width) + 1;
  std::vector<double> counts(n_bins, 0.0);
  for (double d : durations) {
    int k = static_cast<int>(d / bin_width);
    k = std::min(k, n_bins - 1);
    counts[k] += 1.0;
  }

  // WLS of ln(count) vs bin center, weight = count.
  double sw = 0.0, st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  int used = 0;
  for (int k = 0; k < n_bins; ++k) {
    const double center = (k + 0.5) * bin_width;
    if (center < min_duration_cut || counts[k] <= 0.0) continue;
    const double w = counts[k];
    const double y = std::log(counts[k]);
    sw += w;
    st += w * center;
    sy += w * y;
    stt += w * center * center;
    sty += w * center * y;
    ++used;
  }
  if (used < 2)
    throw NumericError("fit_tunnel_in_time: fewer than 2 non-empty retained bins");
  const double denom = sw * stt - st * st;
  if (denom <= 0.0) throw NumericError("fit_tunnel_in_time: singular fit");
  const double slope = (sw * sty - st * sy) / denom;
  if (slope >= 0.0)
    throw NumericError("fit_tunnel_in_time: non-decaying histogram");
  const double sigma_slope = std::sqrt(sw / denom);
  TunnelTimeFit fit;
  fit.tau = -1.0 / slope;
  fit.sigma_tau = sigma_slope / (slope * slope);
  fit.bins_used = used;
  return fit;
}

// Maximum-likelihood cross-check on the truncated sample: for an
// exponential, tau = mean(d - cut | d >= cut).
inline TunnelTimeFit mle_tunnel_in_time(const std::vector<double>& durations,
                                        double min_duration_cut) {
  std::vector<double> kept;
  for (double d : durations)
    if (d >= min_duration_cut) kept.push_back(d - min_duration_cut);
  if (kept.size() < 50)
    throw NumericError("mle_tunnel_in_time: need at least 50 durations above the cut");
  const double mean = std::accumulate(kept.begin(), kept.end(), 0.0) / kept.size();
  if (mean <= 0.0) throw NumericError("mle_tunnel_in_time: degenerate durations");
  TunnelTimeFit fit;
  fit.tau = mean;
  fit.sigma_tau = mean / std::sqrt(static_cast<double>(kept.size()));
  fit.bins_used = static_cast<int>(kept.size());
  return fit;
}

}  // namespace dpr
