#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tailbound/dists.hpp"
#include "tailbound/stats.hpp"

namespace tailbound {

inline constexpr std::uint64_t kDefaultSeed = 1;
inline constexpr std::size_t kDefaultReplicates = 100000;

struct SimulationConfig {
  DistributionSpec spec = DistributionSpec::exponential(1.0);
  std::size_t n = 100;
  std::size_t replicates = kDefaultReplicates;
  std::uint64_t base_seed = kDefaultSeed;
  std::vector<double> a_levels{1.0, 3.0, 5.0};
  std::vector<double> tail_multipliers{1.0, 0.5, 0.2};
  /// Worker threads; 0 picks hardware concurrency. Results do not depend on it.
  unsigned workers = 1;

  /// Throws InvalidParameter on a violated invariant.
  void validate() const;
};

/// min, 0.01, median, 0.99, max (nearest-rank) and mean of a statistic.
struct SummaryStats {
  double min = 0.0;
  double q01 = 0.0;
  double median = 0.0;
  double q99 = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

SummaryStats summarize(std::vector<double> values);

struct LevelProbability {
  double level = 0.0;        // a (table 1) or c (table 2)
  double probability = 0.0;
};

struct Table1Row {
  DistributionSpec spec;
  std::size_t n = 0;
  std::size_t replicates = 0;
  double q1 = 0.0;             // Q(1 - 1/n)
  SummaryStats scaled_bound;   // n eB(q1) = X_{n,n} / q1 over replicates
  std::vector<LevelProbability> exceed;  // Pr{X_{n,n} > Q(1 - a/n)}
};

struct Table2Cell {
  DistributionSpec spec;
  std::size_t n = 0;
  std::size_t replicates = 0;
  double multiplier = 0.0;     // c = n (1 - F(q_c))
  double probability = 0.0;    // 1 - c/n
  double quantile = 0.0;       // q_c
  double median = 0.0;         // median of X_{n,n} / q_c
  double exceed_probability = 0.0;  // Pr{X_{n,n} / q_c >= c}
};

/// Maximum of one n-sample per replicate, in replicate order. Replicate r
/// draws from Rng::stream(base_seed, r).
std::vector<double> simulate_maxima(const DistributionSpec& spec, std::size_t n,
                                    std::size_t replicates, std::uint64_t base_seed,
                                    unsigned workers = 1);

Table1Row run_table1(const SimulationConfig& config);
std::vector<Table2Cell> run_table2(const SimulationConfig& config);

/// Smallest n with 1 - F(x0)^n >= confidence.
std::size_t min_n_for_max_exceeding(const DistributionSpec& spec, double x0,
                                    double confidence);

/// Fraction of replicates whose n-sample maximum exceeds x0.
double simulate_max_exceeding(const DistributionSpec& spec, double x0, std::size_t n,
                              std::size_t replicates, std::uint64_t seed);

/// Simulation counterpart of min_n_for_max_exceeding: the smallest n whose
/// simulated exceedance frequency reaches `confidence`, searched up to n_max.
std::size_t min_n_for_max_exceeding_simulated(const DistributionSpec& spec, double x0,
                                              double confidence, std::size_t replicates,
                                              std::uint64_t seed, std::size_t n_max = 1000);

}  // namespace tailbound
