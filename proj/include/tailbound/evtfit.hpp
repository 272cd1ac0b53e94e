#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tailbound/bounds.hpp"
#include "tailbound/dists.hpp"

namespace tailbound {

/// Admissible shape range for GPD maximum likelihood.
inline constexpr double kXiLower = -0.99;
inline constexpr double kXiUpper = 10.0;

// Generalized Pareto law on y >= 0 with shape xi and scale beta.
double gpd_tail(double y, double xi, double beta);
double gpd_cdf(double y, double xi, double beta);
/// y with gpd_tail(y) = q.
double gpd_tail_quantile(double q, double xi, double beta);
/// Log-likelihood of `y`; -inf outside the parameter support.
double gpd_loglik(std::span<const double> y, double xi, double beta);

struct GpdMle {
  double xi = 0.0;
  double beta = 0.0;
  double loglik = 0.0;
  bool converged = false;
  bool at_boundary = false;  // xi within 1e-6 of the admissible range ends
};

/// Profile-likelihood MLE over xi in (kXiLower, kXiUpper), with beta solved
/// exactly for each xi. Returns xi = 0 (exponential) when that limit is at
/// least as likely as the interior optimum.
/// Throws DataError unless `y` holds at least two distinct positive values.
GpdMle fit_gpd_mle(std::span<const double> y);

/// Peaks-over-threshold fit: GPD on y = x - mu for the observations x > mu.
struct GpdFit {
  double mu = 0.0;
  double xi = 0.0;
  double beta = 0.0;
  double alpha = kInfinite;  // 1/xi when xi > 0
  std::size_t n_exceed = 0;
  double loglik = 0.0;
  bool converged = false;

  /// Conditional tail Pr{X > x | X > mu}; 1 below mu.
  double tail(double x) const;
  /// x with tail(x) = q.
  double tail_quantile(double q) const;
  /// The same law written as a location Pareto on [mu, inf). Needs xi > 0.
  DistributionSpec as_location_pareto() const;
};

GpdFit fit_lpd(const SortedSample& sample, double mu);

/// Fixed-parameter fit for known (alpha, beta, mu) values.
GpdFit make_lpd(double alpha, double beta, double mu, std::size_t n_exceed);

/// Unconditional tail of a variable whose fraction `exceed_fraction` lies
/// above fit.mu and follows the fit there. Defined for x >= mu.
struct FittedTail {
  GpdFit fit;
  double exceed_fraction = 1.0;

  double tail(double x) const;
  double tail_quantile(double q) const;
};

/// Power-law conditional MLE: k / sum_{x_i > mu} ln(x_i / mu).
double fit_hill(const SortedSample& sample, double mu);

/// sup |F_empirical - F| over sorted `values`, checking both sides of each step.
double ks_distance(std::span<const double> sorted_values,
                   const std::function<double(double)>& cdf);
/// KS distance of exceedances y (sorted) against a fitted GPD.
double ks_distance(std::span<const double> sorted_exceedances, const GpdFit& fit);

/// Sample coefficient of variation (n - 1 denominator).
double residual_cv(std::span<const double> values);

enum class ScanMethod { ClausetKs, CvLowest, CvBest };
std::string_view to_string(ScanMethod method);

struct ThresholdCandidate {
  double mu = 0.0;
  std::size_t n_exceed = 0;
  double xi = 0.0;
  double beta = 0.0;
  double alpha = kInfinite;
  double statistic = 0.0;  // KS distance (Clauset) or residual CV
  std::optional<double> p_value;
};

struct ThresholdScan {
  ScanMethod method = ScanMethod::ClausetKs;
  std::vector<ThresholdCandidate> candidates;
  std::optional<std::size_t> selected;  // empty: no candidate qualified

  bool found() const noexcept { return selected.has_value(); }
  /// Throws DataError when nothing was selected.
  const ThresholdCandidate& chosen() const;
};

struct ClausetOptions {
  /// Explicit candidate thresholds; empty means every distinct positive
  /// value below the top `keep_top` order statistics.
  std::vector<double> grid;
  std::size_t keep_top = 5;
};

/// Power-law threshold by minimum KS distance; ties go to the smaller mu.
ThresholdScan select_threshold_clauset(const SortedSample& sample,
                                       const ClausetOptions& options = {});

struct CvOptions {
  ScanMethod policy = ScanMethod::CvLowest;
  double p_threshold = 0.10;
  /// Candidate thresholds as sample-quantile levels. Level 0 stands for
  /// mu = 0, i.e. every positive observation.
  std::vector<double> levels = default_levels();
  std::size_t bootstrap = 500;
  std::uint64_t seed = 1;
  std::size_t min_exceed = 5;

  static std::vector<double> default_levels();
};

/// Residual-CV threshold scan with a parametric-bootstrap p-value per
/// candidate. CvLowest picks the smallest mu with p > p_threshold, CvBest the
/// largest p.
ThresholdScan select_threshold_cv(const SortedSample& sample, const CvOptions& options = {});

/// exceed_fraction * Pr{X > nu | X > mu}, for nu >= fit.mu.
double lpd_tail_prob(const GpdFit& fit, double nu, double exceed_fraction = 1.0);

/// Years between events: 1 / (prob * trading_days_per_year).
double return_period(double prob, double trading_days_per_year = 250.0);

}  // namespace tailbound
