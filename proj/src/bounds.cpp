#include "tailbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tailbound {

namespace {

void require_threshold(double nu, const char* what) {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw DomainError(std::string(what) + ": threshold must be positive and finite");
  }
}

}  // namespace

SortedSample::SortedSample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DataError("sample is empty");
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw DataError("sample values must be finite and nonnegative");
    }
  }
  std::sort(values_.begin(), values_.end());
}

double SortedSample::mean() const noexcept {
  return std::accumulate(values_.begin(), values_.end(), 0.0) /
         static_cast<double>(values_.size());
}

SortedSample SortedSample::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidParameter("scale factor must be positive");
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return SortedSample(std::move(v));
}

std::string_view to_string(BoundMethod method) {
  switch (method) {
    case BoundMethod::EmpiricalEB: return "empirical-eB";
    case BoundMethod::ScaledEB: return "scaled-eB";
    case BoundMethod::PartialMean: return "partial-mean";
    case BoundMethod::ImprovedMarkov: return "improved-markov";
    case BoundMethod::TraditionalMarkov: return "traditional-markov";
    case BoundMethod::MomentMarkov: return "moment-markov";
  }
  return "unknown";
}

double partial_mean(const SortedSample& sample, std::size_t k) {
  const std::size_t n = sample.size();
  if (k < 1 || k > n) {
    throw DomainError("partial_mean: k must lie in [1, " + std::to_string(n) + "]");
  }
  const auto v = sample.values();
  const double top = std::accumulate(v.end() - static_cast<std::ptrdiff_t>(k), v.end(), 0.0);
  return top / static_cast<double>(n);
}

std::size_t count_exceedances(const SortedSample& sample, double nu) {
  const auto v = sample.values();
  return static_cast<std::size_t>(v.end() - std::upper_bound(v.begin(), v.end(), nu));
}

TailBoundReport empirical_bound(const SortedSample& sample, double nu) {
  require_threshold(nu, "empirical_bound");
  TailBoundReport r;
  r.threshold = nu;
  r.method = BoundMethod::EmpiricalEB;
  r.n = sample.size();
  r.sample_max = sample.maximum();
  r.bound = r.sample_max / (static_cast<double>(r.n) * nu);
  r.below_maximum = nu < r.sample_max;
  return r;
}

TailBoundReport scaled_bound(const SortedSample& sample, double nu, double a) {
  if (!(a >= 1.0) || !std::isfinite(a)) {
    throw InvalidParameter("scaled_bound: a must be >= 1");
  }
  TailBoundReport r = empirical_bound(sample, nu);
  r.method = BoundMethod::ScaledEB;
  r.a = a;
  r.bound *= a;
  return r;
}

TailBoundReport partial_mean_bound(const SortedSample& sample, double nu) {
  require_threshold(nu, "partial_mean_bound");
  const std::size_t k = count_exceedances(sample, nu);
  if (k == 0) return empirical_bound(sample, nu);
  TailBoundReport r;
  r.threshold = nu;
  r.method = BoundMethod::PartialMean;
  r.n = sample.size();
  r.sample_max = sample.maximum();
  r.k = k;
  r.bound = partial_mean(sample, k) / nu;
  r.below_maximum = true;
  return r;
}

TailBoundReport analytic_bound(const DistributionSpec& spec, BoundMethod method, double nu,
                               int k) {
  TailBoundReport r;
  r.threshold = nu;
  r.method = method;
  switch (method) {
    case BoundMethod::ImprovedMarkov:
      r.bound = improved_markov_bound(spec, nu);
      break;
    case BoundMethod::TraditionalMarkov:
      r.bound = traditional_markov_bound(spec, nu);
      break;
    case BoundMethod::MomentMarkov:
      r.bound = moment_markov_bound(spec, nu, k);
      r.k = static_cast<std::size_t>(k);
      break;
    default:
      throw InvalidParameter("analytic_bound: method " + std::string(to_string(method)) +
                             " needs a sample");
  }
  return r;
}

double coverage_probability(std::size_t n, double a) {
  const double dn = static_cast<double>(n);
  if (!(a > 0.0) || !(a < dn)) {
    throw DomainError("coverage_probability: need 0 < a < n");
  }
  return -std::expm1(dn * std::log1p(-a / dn));
}

double coverage_limit(double a) {
  if (!(a > 0.0)) throw DomainError("coverage_limit: need a > 0");
  return -std::expm1(-a);
}

double max_cdf_value_distribution(std::size_t n, double x) {
  if (n < 1) throw DomainError("max_cdf_value_distribution: n must be >= 1");
  if (!(x > 0.0 && x < 1.0)) {
    throw DomainError("max_cdf_value_distribution: x must lie in (0, 1)");
  }
  return std::pow(x, static_cast<double>(n));
}

double expected_order_statistic_cdf(std::size_t r, std::size_t n) {
  if (r < 1 || r > n) throw DomainError("expected_order_statistic_cdf: need 1 <= r <= n");
  return static_cast<double>(r) / static_cast<double>(n + 1);
}

double np_max_probability(std::size_t n) {
  if (n < 1) throw DomainError("np_max_probability: n must be >= 1");
  return 1.0 / static_cast<double>(n + 1);
}

}  // namespace tailbound
