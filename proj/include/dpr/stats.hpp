#pragma once

#include <map>
#include <vector>

#include "dpr/error.hpp"

namespace dpr {

// Aggregated per-batch blip statistics. The mean and its 1-sigma error are
// taken over contiguous subgroup means, mirroring the batch -> subgroup
// averaging of the readout experiments.
struct ReadoutStats {
  std::vector<int> per_trace_counts;
  std::vector<double> subgroup_means;
  double mean = 0.0;
  double sigma = 0.0;  // 1 sigma of the subgroup means
  std::map<int, int> count_histogram;
};

inline ReadoutStats subgroup_stats(const std::vector<int>& counts, int group_size) {
  if (group_size < 1) throw ConfigError("subgroup_stats: group size must be >= 1");
  if (counts.empty() || counts.size() % group_size != 0)
    throw ConfigError("subgroup_stats: count list length not divisible by group size");
  ReadoutStats st;
  st.per_trace_counts = counts;
  const int n_groups = static_cast<int>(counts.size()) / group_size;
  st.subgroup_means.reserve(n_groups);
  for (int g = 0; g < n_groups; ++g) {
    double sum = 0.0;
    for (int i = 0; i < group_size; ++i) sum += counts[g * group_size + i];
    st.subgroup_means.push_back(sum / group_size);
  }
  double total = 0.0;
  for (double m : st.subgroup_means) total += m;
  st.mean = total / n_groups;
  double var = 0.0;
  for (double m : st.subgroup_means) var += (m - st.mean) * (m - st.mean);
  st.sigma = n_groups > 1 ? std::sqrt(var / (n_groups - 1)) : 0.0;
  for (int c : counts) st.count_histogram[c]++;
  return st;
}

// Spin-up decision rule: a trace is called "up" when at least one blip was
// detected.
inline double spin_up_proportion(const std::vector<int>& counts) {
  if (counts.empty()) throw ConfigError("spin_up_proportion: empty count list");
  int up = 0;
  for (int c : counts)
    if (c >= 1) ++up;
  return static_cast<double>(up) / counts.size();
}

// Expected parallel-regime spin-up proportion given the anti-parallel one:
// two independent chances to catch a blip, 1 - (1 - p)^2.
inline double predicted_parallel_proportion(double p_anti) {
  if (!(p_anti >= 0.0 && p_anti <= 1.0))
    throw ContractError("predicted_parallel_proportion: probability out of [0, 1]");
  return 1.0 - (1.0 - p_anti) * (1.0 - p_anti);
}

}  // namespace dpr
