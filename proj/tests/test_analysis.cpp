#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "dpr/rng.hpp"
#include "dpr/stats.hpp"

using namespace dpr;

TEST_CASE("constant counts give zero spread under any grouping") {
  std::vector<int> counts(1000, 2);
  for (int g : {1, 10, 100, 1000}) {
    const ReadoutStats st = subgroup_stats(counts, g);
    CHECK(st.mean == 2.0);
    CHECK(st.sigma == 0.0);
  }
}

TEST_CASE("grouping shape and histogram totals") {
  std::vector<int> counts(10000, 0);
  for (size_t i = 0; i < counts.size(); ++i) counts[i] = static_cast<int>(i % 3);
  const ReadoutStats st = subgroup_stats(counts, 100);
  CHECK(st.subgroup_means.size() == 100);
  int total = 0;
  for (const auto& [c, n] : st.count_histogram) total += n;
  CHECK(total == 10000);
  CHECK_THROWS_AS(subgroup_stats(counts, 3), ConfigError);
  CHECK_THROWS_AS(subgroup_stats({}, 10), ConfigError);
  CHECK_THROWS_AS(subgroup_stats(counts, 0), ConfigError);
}

TEST_CASE("mean of per-trace counts equals mean of subgroup means") {
  Rng rng(31);
  std::vector<int> counts;
  for (int i = 0; i < 10000; ++i)
    counts.push_back(rng.bernoulli(0.6) ? (rng.bernoulli(0.5) ? 2 : 1) : 0);
  const ReadoutStats st = subgroup_stats(counts, 100);
  double direct = 0.0;
  for (int c : counts) direct += c;
  direct /= counts.size();
  CHECK(st.mean == Catch::Approx(direct).margin(1e-12));
}

TEST_CASE("subgroup-mean spread scales as sigma/sqrt(group size)") {
  Rng rng(8);
  std::vector<int> counts;
  const double p = 0.5;
  for (int i = 0; i < 10000; ++i) counts.push_back(rng.bernoulli(p) ? 1 : 0);
  const ReadoutStats st = subgroup_stats(counts, 100);
  const double pop_sigma = std::sqrt(p * (1.0 - p));
  CHECK(st.sigma == Catch::Approx(pop_sigma / 10.0).epsilon(0.20));
}

TEST_CASE("spin-up proportion uses the count >= 1 rule") {
  CHECK(spin_up_proportion({0, 0, 0}) == 0.0);
  CHECK(spin_up_proportion({1, 2, 3}) == 1.0);
  CHECK(spin_up_proportion({0, 1, 0, 2}) == 0.5);
  CHECK_THROWS_AS(spin_up_proportion({}), ConfigError);
}

TEST_CASE("binomial detection maps to the proportion") {
  Rng rng(55);
  const double p = 0.72;
  std::vector<int> counts;
  const int n = 20000;
  for (int i = 0; i < n; ++i) counts.push_back(rng.bernoulli(p) ? 1 : 0);
  const double sigma = std::sqrt(p * (1.0 - p) / n);
  CHECK(spin_up_proportion(counts) == Catch::Approx(p).margin(3.0 * sigma));
}

TEST_CASE("parallel contrast prediction") {
  CHECK(predicted_parallel_proportion(0.60) == Catch::Approx(0.84).margin(1e-15));
  CHECK(predicted_parallel_proportion(0.0) == 0.0);
  CHECK(predicted_parallel_proportion(1.0) == 1.0);
  CHECK_THROWS_AS(predicted_parallel_proportion(-0.1), ContractError);
  CHECK_THROWS_AS(predicted_parallel_proportion(1.1), ContractError);
  // Two chances always beat one.
  for (double p = 0.05; p < 1.0; p += 0.05)
    CHECK(predicted_parallel_proportion(p) >= p);
}
