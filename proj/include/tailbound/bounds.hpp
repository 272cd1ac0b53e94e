#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "tailbound/dists.hpp"
#include "tailbound/error.hpp"

namespace tailbound {

/// Ascending sample of nonnegative reals: the carrier of every empirical bound.
class SortedSample {
 public:
  /// Sorts `values`; throws DataError when empty, non-finite or negative.
  explicit SortedSample(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  /// x_{n,n}.
  double maximum() const noexcept { return values_.back(); }
  /// x_{n-1,n}; the maximum itself when n == 1.
  double second_largest() const noexcept {
    return values_.size() > 1 ? values_[values_.size() - 2] : values_.back();
  }
  double mean() const noexcept;

  SortedSample scaled(double factor) const;

 private:
  std::vector<double> values_;
};

enum class BoundMethod {
  EmpiricalEB,
  ScaledEB,
  PartialMean,
  ImprovedMarkov,
  TraditionalMarkov,
  MomentMarkov,
};

std::string_view to_string(BoundMethod method);

struct TailBoundReport {
  double threshold = 0.0;
  double bound = 0.0;
  BoundMethod method = BoundMethod::EmpiricalEB;
  std::size_t n = 0;          // sample size (0 for analytic bounds)
  double sample_max = 0.0;    // x_{n,n} (empirical methods)
  std::size_t k = 0;          // exceedances (partial-mean) or moment order
  double a = 1.0;             // scale factor (scaled-eB)
  bool below_maximum = false; // advisory: threshold below x_{n,n}
};

/// (1/n) * sum of the k largest values.
double partial_mean(const SortedSample& sample, std::size_t k);

/// #{x_i > nu}. Ties at nu do not count.
std::size_t count_exceedances(const SortedSample& sample, double nu);

/// eB(nu) = x_{n,n} / (n nu). Allowed below the maximum with an advisory flag.
TailBoundReport empirical_bound(const SortedSample& sample, double nu);

/// a x_{n,n} / (n nu), a >= 1.
TailBoundReport scaled_bound(const SortedSample& sample, double nu, double a);

/// pM_k / nu with k = count_exceedances(nu); defers to empirical_bound when
/// no observation exceeds nu.
TailBoundReport partial_mean_bound(const SortedSample& sample, double nu);

/// Analytic Markov-type bound from a known law, wrapped as a report.
/// `k` is the moment order for MomentMarkov and ignored otherwise.
TailBoundReport analytic_bound(const DistributionSpec& spec, BoundMethod method, double nu,
                               int k = 1);

/// 1 - (1 - a/n)^n: probability that Pr{X > X_{n,n}} < a/n.
double coverage_probability(std::size_t n, double a);

/// n -> infinity limit of coverage_probability: 1 - exp(-a).
double coverage_limit(double a);

/// Pr{F(X_{n,n}) <= x} = x^n.
double max_cdf_value_distribution(std::size_t n, double x);

/// E[F(X_{r,n})] = r / (n + 1).
double expected_order_statistic_cdf(std::size_t r, std::size_t n);

/// 1 / (n + 1): the classical approximation to Pr{X > X_{n,n}}.
double np_max_probability(std::size_t n);

struct Q1Equivalence {
  double q1 = 0.0;
  bool max_exceeds_q1 = false;  // x_{n,n} >= q1
  bool ineq_at_max = false;     // 1 - F(x_{n,n}) <= 1/n
  bool ineq_at_q1 = false;      // 1 - F(q1) <= eB(q1)

  bool consistent() const noexcept {
    return max_exceeds_q1 == ineq_at_max && ineq_at_max == ineq_at_q1;
  }
};

/// Anything with a tail function and a tail quantile.
template <class Law>
concept TailLaw = requires(const Law& law, double x) {
  { law.tail(x) } -> std::convertible_to<double>;
  { law.tail_quantile(x) } -> std::convertible_to<double>;
};

/// The three equivalent statements about q1 = Q(1 - 1/n), evaluated separately.
template <TailLaw Law>
Q1Equivalence q1_equivalence_check(const SortedSample& sample, const Law& law) {
  const std::size_t n = sample.size();
  if (n < 2) throw DataError("q1_equivalence_check: need at least 2 observations");
  const double inv_n = 1.0 / static_cast<double>(n);
  Q1Equivalence r;
  r.q1 = law.tail_quantile(inv_n);
  const double max = sample.maximum();
  r.max_exceeds_q1 = max >= r.q1;
  r.ineq_at_max = law.tail(max) <= inv_n;
  r.ineq_at_q1 = law.tail(r.q1) <= max / (static_cast<double>(n) * r.q1);
  return r;
}

/// Adapter giving a DistributionSpec the TailLaw interface.
struct SpecLaw {
  const DistributionSpec& spec;
  double tail(double x) const { return tailbound::tail(spec, x); }
  double tail_quantile(double q) const { return tailbound::tail_quantile(spec, q); }
};

inline Q1Equivalence q1_equivalence_check(const SortedSample& sample,
                                          const DistributionSpec& spec) {
  return q1_equivalence_check(sample, SpecLaw{spec});
}

}  // namespace tailbound
