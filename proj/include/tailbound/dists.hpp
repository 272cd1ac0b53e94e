#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "tailbound/rng.hpp"

namespace tailbound {

enum class DistKind { Exponential, HalfNormal, ParetoI, LocationPareto };

std::string_view to_string(DistKind kind);

/// Identity and parameters of one of the four closed-form laws.
///
///   Exponential(rate)               F(x) = 1 - exp(-rate x),            x >= 0
///   HalfNormal(sigma)               F(x) = 2 Phi(x / sigma) - 1,        x >= 0
///   ParetoI(alpha, mu)              1 - F(x) = (mu / x)^alpha,          x >= mu > 0
///   LocationPareto(alpha, mu, delta)
///                                   1 - F(x) = ((mu+delta)/(x+delta))^alpha, x >= mu >= 0
///
/// With mu = 0 the location Pareto is the generalized Pareto law with
/// shape xi = 1/alpha and scale beta = delta/alpha.
///
/// Construction validates; an instance always satisfies its invariants.
class DistributionSpec {
 public:
  static DistributionSpec exponential(double rate = 1.0);
  static DistributionSpec half_normal(double sigma);
  /// Half-normal with unit expectation, sigma = sqrt(pi/2).
  static DistributionSpec half_normal_unit_mean();
  static DistributionSpec pareto_i(double alpha, double mu = 1.0);
  static DistributionSpec location_pareto(double alpha, double mu, double delta);
  /// GPD(xi, beta) with xi > 0 as LocationPareto(1/xi, 0, beta/xi).
  static DistributionSpec gpd(double xi, double beta);

  DistKind kind() const noexcept { return kind_; }
  double rate() const noexcept { return rate_; }
  double sigma() const noexcept { return sigma_; }
  double alpha() const noexcept { return alpha_; }
  double mu() const noexcept { return mu_; }
  double delta() const noexcept { return delta_; }

  /// Smallest point of the support.
  double support_min() const noexcept;

  std::string describe() const;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;

 private:
  DistributionSpec() = default;

  DistKind kind_ = DistKind::Exponential;
  double rate_ = 0.0;
  double sigma_ = 0.0;
  double alpha_ = 0.0;
  double mu_ = 0.0;
  double delta_ = 0.0;
};

/// Marker for a moment that does not exist.
inline constexpr double kInfinite = std::numeric_limits<double>::infinity();

double pdf(const DistributionSpec& spec, double x);
double cdf(const DistributionSpec& spec, double x);
/// 1 - cdf, evaluated without cancellation.
double tail(const DistributionSpec& spec, double x);
double quantile(const DistributionSpec& spec, double p);
/// x with tail(x) = q; accurate for q near 0.
double tail_quantile(const DistributionSpec& spec, double q);

/// One inverse-transform draw.
double draw(const DistributionSpec& spec, Rng& rng);
std::vector<double> sample(const DistributionSpec& spec, std::size_t n, Rng& rng);
std::vector<double> sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed);

/// E(X^k); kInfinite when the moment diverges.
double moment(const DistributionSpec& spec, int k);
double mean(const DistributionSpec& spec);
bool has_finite_mean(const DistributionSpec& spec);

/// E(X 1{X > nu}). Equals mean(spec) for nu at or below the support minimum.
/// Throws InfiniteMoment when the mean diverges.
double partial_expectation(const DistributionSpec& spec, double nu);

/// E_nu(X) / nu, the sharpened Markov bound on Pr{X > nu}.
double improved_markov_bound(const DistributionSpec& spec, double nu);
/// E(X) / nu.
double traditional_markov_bound(const DistributionSpec& spec, double nu);
/// E(X^k) / nu^k.
double moment_markov_bound(const DistributionSpec& spec, double nu, int k);

/// (1/nu) * integral_nu^inf (1 - F(x)) dx, the gap between the improved
/// Markov bound and the tail. Closed forms for every kind.
double markov_error(const DistributionSpec& spec, double nu);

/// Smallest x0 in the support with x (1 - F(x)) nonincreasing on (x0, inf).
double x_tail_decreasing_from(const DistributionSpec& spec);

}  // namespace tailbound
