#include "tailbound/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tailbound/error.hpp"

namespace tailbound {

double nearest_rank_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DataError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile level must lie in [0, 1]");
  const auto r = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size())));
  return sorted[r == 0 ? 0 : std::min(r, sorted.size()) - 1];
}

double sample_mean(std::span<const double> values) {
  if (values.empty()) throw DataError("mean of an empty sample");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values) {
  if (values.size() < 2) throw DataError("standard deviation needs at least 2 values");
  const double m = sample_mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace tailbound
