#include "tailbound/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "tailbound/error.hpp"
#include "tailbound/rng.hpp"

namespace tailbound {

void SimulationConfig::validate() const {
  if (replicates < 1) throw InvalidParameter("simulation: replicates must be >= 1");
  if (n < 2) throw InvalidParameter("simulation: n must be >= 2");
  const double dn = static_cast<double>(n);
  for (double a : a_levels) {
    if (!(a > 0.0 && a < dn)) throw InvalidParameter("simulation: a-levels must lie in (0, n)");
  }
  for (double c : tail_multipliers) {
    if (!(c > 0.0 && c <= 1.0)) {
      throw InvalidParameter("simulation: tail multipliers must lie in (0, 1]");
    }
  }
}

SummaryStats summarize(std::vector<double> values) {
  if (values.empty()) throw DataError("summary of an empty sample");
  std::sort(values.begin(), values.end());
  SummaryStats s;
  s.min = values.front();
  s.q01 = nearest_rank_quantile(values, 0.01);
  s.median = nearest_rank_quantile(values, 0.5);
  s.q99 = nearest_rank_quantile(values, 0.99);
  s.max = values.back();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  return s;
}

std::vector<double> simulate_maxima(const DistributionSpec& spec, std::size_t n,
                                    std::size_t replicates, std::uint64_t base_seed,
                                    unsigned workers) {
  if (n < 1) throw InvalidParameter("simulate_maxima: n must be >= 1");
  std::vector<double> maxima(replicates);
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      Rng rng = Rng::stream(base_seed, r);
      double m = draw(spec, rng);
      for (std::size_t i = 1; i < n; ++i) m = std::max(m, draw(spec, rng));
      maxima[r] = m;
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(replicates, 1)));
  if (workers <= 1) {
    run_range(0, replicates);
    return maxima;
  }
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (replicates + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(replicates, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_range, begin, end);
    }
  }
  return maxima;
}

Table1Row run_table1(const SimulationConfig& config) {
  config.validate();
  const double dn = static_cast<double>(config.n);
  Table1Row row{config.spec, config.n, config.replicates, 0.0, {}, {}};
  row.q1 = tail_quantile(config.spec, 1.0 / dn);

  const auto maxima = simulate_maxima(config.spec, config.n, config.replicates,
                                      config.base_seed, config.workers);
  std::vector<double> scaled(maxima.size());
  std::transform(maxima.begin(), maxima.end(), scaled.begin(),
                 [&](double m) { return m / row.q1; });
  row.scaled_bound = summarize(std::move(scaled));

  for (double a : config.a_levels) {
    const double qa = tail_quantile(config.spec, a / dn);
    const auto hits = std::count_if(maxima.begin(), maxima.end(), [&](double m) { return m > qa; });
    row.exceed.push_back({a, static_cast<double>(hits) / static_cast<double>(maxima.size())});
  }
  return row;
}

std::vector<Table2Cell> run_table2(const SimulationConfig& config) {
  config.validate();
  const double dn = static_cast<double>(config.n);
  const auto maxima = simulate_maxima(config.spec, config.n, config.replicates,
                                      config.base_seed, config.workers);
  std::vector<Table2Cell> cells;
  std::vector<double> ratio(maxima.size());
  for (double c : config.tail_multipliers) {
    Table2Cell cell{config.spec, config.n, config.replicates, c, 1.0 - c / dn, 0.0, 0.0, 0.0};
    cell.quantile = tail_quantile(config.spec, c / dn);
    std::transform(maxima.begin(), maxima.end(), ratio.begin(),
                   [&](double m) { return m / cell.quantile; });
    const auto hits = std::count_if(ratio.begin(), ratio.end(), [&](double s) { return s >= c; });
    cell.exceed_probability = static_cast<double>(hits) / static_cast<double>(ratio.size());
    std::sort(ratio.begin(), ratio.end());
    cell.median = nearest_rank_quantile(ratio, 0.5);
    cells.push_back(cell);
  }
  return cells;
}

std::size_t min_n_for_max_exceeding(const DistributionSpec& spec, double x0, double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw DomainError("min_n_for_max_exceeding: confidence must lie in (0, 1)");
  }
  const double f = cdf(spec, x0);
  if (!(f > 0.0 && f < 1.0)) {
    throw DomainError("min_n_for_max_exceeding: F(x0) must lie strictly inside (0, 1)");
  }
  const double n = std::ceil(std::log1p(-confidence) / std::log(f));
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

double simulate_max_exceeding(const DistributionSpec& spec, double x0, std::size_t n,
                              std::size_t replicates, std::uint64_t seed) {
  if (replicates < 1) throw InvalidParameter("replicates must be >= 1");
  const auto maxima = simulate_maxima(spec, n, replicates, seed);
  const auto hits = std::count_if(maxima.begin(), maxima.end(), [&](double m) { return m > x0; });
  return static_cast<double>(hits) / static_cast<double>(replicates);
}

std::size_t min_n_for_max_exceeding_simulated(const DistributionSpec& spec, double x0,
                                              double confidence, std::size_t replicates,
                                              std::uint64_t seed, std::size_t n_max) {
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (simulate_max_exceeding(spec, x0, n, replicates, seed) >= confidence) return n;
  }
  throw ConvergenceError("min_n_for_max_exceeding_simulated: confidence not reached by n_max");
}

}  // namespace tailbound
