#pragma once

#include <span>

namespace tailbound {

/// Nearest-rank empirical quantile of an ascending range: the ceil(p R)-th
/// smallest value, with p = 0 giving the minimum.
double nearest_rank_quantile(std::span<const double> sorted, double p);

double sample_mean(std::span<const double> values);

/// Standard deviation with the n - 1 denominator.
double sample_sd(std::span<const double> values);

}  // namespace tailbound
