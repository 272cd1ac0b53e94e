#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "tailbound/bounds.hpp"
#include "tailbound/dists.hpp"
#include "tailbound/error.hpp"
#include "tailbound/rng.hpp"

using namespace tailbound;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const SortedSample kFour({4.0, 1.0, 3.0, 2.0});

// A loss sample with the reference maximum and size, for checking arithmetic only.
SortedSample dji_shaped() {
  std::vector<double> v(2013, 1.0);
  v.back() = 13.84;
  return SortedSample(v);
}

}  // namespace

TEST_CASE("sorted sample validation", "[bounds]") {
  CHECK_THROWS_AS(SortedSample({}), DataError);
  CHECK_THROWS_AS(SortedSample({1.0, -0.5}), DataError);
  CHECK_THROWS_AS(SortedSample({1.0, std::nan("")}), DataError);
  CHECK(kFour.maximum() == 4.0);
  CHECK(kFour.second_largest() == 3.0);
  CHECK(kFour[0] == 1.0);
  CHECK_THAT(kFour.mean(), WithinAbs(2.5, 1e-15));
}

TEST_CASE("partial mean", "[bounds]") {
  CHECK_THAT(partial_mean(kFour, 1), WithinAbs(1.0, 1e-15));
  CHECK_THAT(partial_mean(kFour, 4), WithinAbs(2.5, 1e-15));
  CHECK_THAT(partial_mean(kFour, 2), WithinAbs(1.75, 1e-15));
  CHECK_THROWS_AS(partial_mean(kFour, 0), DomainError);
  CHECK_THROWS_AS(partial_mean(kFour, 5), DomainError);
  double prev = 0.0;
  for (std::size_t k = 1; k <= 4; ++k) {
    CHECK(partial_mean(kFour, k) >= prev);
    prev = partial_mean(kFour, k);
  }
}

TEST_CASE("count exceedances is strict", "[bounds]") {
  CHECK(count_exceedances(kFour, 2.0) == 2);
  CHECK(count_exceedances(kFour, 4.0) == 0);
  CHECK(count_exceedances(kFour, 0.5) == 4);
}

TEST_CASE("empirical bound", "[bounds]") {
  const auto d = dji_shaped();
  CHECK_THAT(empirical_bound(d, 20.0).bound, WithinAbs(3.44e-4, 5e-7));
  CHECK_THAT(empirical_bound(d, 13.84).bound, WithinAbs(4.97e-4, 5e-7));
  CHECK_THAT(empirical_bound(kFour, 4.0).bound, WithinRel(0.25, 1e-15));
  const auto r = empirical_bound(kFour, 3.0);
  CHECK(r.below_maximum);
  CHECK(r.method == BoundMethod::EmpiricalEB);
  CHECK(r.n == 4);
  CHECK(!empirical_bound(kFour, 5.0).below_maximum);
  CHECK_THROWS_AS(empirical_bound(kFour, 0.0), DomainError);
  CHECK(empirical_bound(kFour, 0.01).bound > 1.0);
}

TEST_CASE("scaled bound", "[bounds]") {
  const auto d = dji_shaped();
  CHECK(scaled_bound(d, 20.0, 1.0).bound == empirical_bound(d, 20.0).bound);
  CHECK_THAT(scaled_bound(d, 20.0, 3.0).bound, WithinAbs(1.031e-3, 5e-7));
  CHECK_THAT(scaled_bound(d, 20.0, 5.0).bound, WithinAbs(1.719e-3, 5e-7));
  CHECK_THROWS_AS(scaled_bound(d, 20.0, 0.5), InvalidParameter);
}

TEST_CASE("partial mean bound", "[bounds]") {
  CHECK_THAT(partial_mean_bound(kFour, 3.5).bound, WithinAbs(0.2857, 5e-5));
  CHECK_THAT(partial_mean_bound(kFour, 2.5).bound, WithinAbs(0.7, 1e-15));
  CHECK_THAT(partial_mean_bound(kFour, 3.999).bound,
             WithinRel(empirical_bound(kFour, 3.999).bound, 1e-15));
  CHECK(partial_mean_bound(kFour, 6.0).method == BoundMethod::EmpiricalEB);
  CHECK_THROWS_AS(partial_mean_bound(kFour, -1.0), DomainError);
}

TEST_CASE("partial mean bound dominates eB below the maximum", "[bounds][property]") {
  Rng rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    const SortedSample s(sample(DistributionSpec::exponential(1.0), 50, rng));
    for (int j = 0; j < 20; ++j) {
      const double nu = 0.01 + rng.uniform() * s.maximum();
      const double pm = partial_mean_bound(s, nu).bound;
      const double eb = empirical_bound(s, nu).bound;
      CHECK(pm >= eb * (1.0 - 1e-15));
      if (nu >= s.second_largest()) CHECK_THAT(pm, WithinRel(eb, 1e-14));
    }
  }
}

TEST_CASE("empirical bound is scale equivariant", "[bounds][property]") {
  Rng rng(17);
  for (int rep = 0; rep < 500; ++rep) {
    const SortedSample s(sample(DistributionSpec::pareto_i(2.5), 40, rng));
    const double c = std::exp(8.0 * rng.uniform() - 4.0);
    const double nu = 0.1 + 10.0 * rng.uniform();
    CHECK_THAT(empirical_bound(s.scaled(c), c * nu).bound,
               WithinRel(empirical_bound(s, nu).bound, 1e-13));
  }
}

TEST_CASE("analytic bound reports", "[bounds]") {
  const auto e = DistributionSpec::exponential(1.0);
  const auto r = analytic_bound(e, BoundMethod::ImprovedMarkov, 6.908);
  CHECK(r.method == BoundMethod::ImprovedMarkov);
  CHECK(r.bound == improved_markov_bound(e, 6.908));
  CHECK(analytic_bound(e, BoundMethod::MomentMarkov, 2.0, 3).bound == moment_markov_bound(e, 2.0, 3));
  CHECK_THROWS_AS(analytic_bound(e, BoundMethod::EmpiricalEB, 2.0), InvalidParameter);
  CHECK(to_string(BoundMethod::PartialMean) == "partial-mean");
}

TEST_CASE("coverage", "[bounds]") {
  CHECK_THAT(coverage_probability(10, 5.0), WithinAbs(0.999, 5e-4));
  CHECK_THAT(coverage_limit(1.0), WithinAbs(0.632, 5e-4));
  CHECK_THAT(coverage_limit(3.0), WithinAbs(0.950, 5e-4));
  CHECK_THAT(coverage_limit(5.0), WithinAbs(0.99326, 5e-6));
  CHECK_THROWS_AS(coverage_probability(10, 10.0), DomainError);
  CHECK_THROWS_AS(coverage_probability(10, 0.0), DomainError);
  for (std::size_t n = 2; n < 2000; n += 7) {
    for (double a : {0.5, 1.0, 1.5}) {
      const double c = coverage_probability(n, a);
      CHECK(c > coverage_limit(a));
      CHECK(coverage_probability(n, a + 0.3) > c);
      CHECK(coverage_probability(n + 1, a) < c);
    }
  }
}

TEST_CASE("order statistic facts", "[bounds]") {
  CHECK_THAT(max_cdf_value_distribution(1, 0.3), WithinAbs(0.3, 1e-16));
  CHECK_THAT(max_cdf_value_distribution(10, 0.5), WithinAbs(9.765625e-4, 1e-16));
  CHECK_THAT(expected_order_statistic_cdf(10, 10), WithinAbs(10.0 / 11.0, 1e-16));
  CHECK_THAT(np_max_probability(1), WithinAbs(0.5, 1e-16));
  CHECK_THAT(np_max_probability(2013), WithinAbs(4.965e-4, 5e-8));
  CHECK_THAT(empirical_bound(dji_shaped(), 13.84).bound,
             WithinRel(np_max_probability(2013) * 2014.0 / 2013.0, 1e-14));
  CHECK_THROWS_AS(max_cdf_value_distribution(3, 1.0), DomainError);
}

TEST_CASE("F of the sample maximum follows x^n", "[bounds][property]") {
  Rng rng(12);
  const auto spec = DistributionSpec::half_normal(1.0);
  const std::size_t n = 10;
  const int reps = 20000;
  int below = 0;
  for (int r = 0; r < reps; ++r) {
    const SortedSample s(sample(spec, n, rng));
    if (cdf(spec, s.maximum()) <= 0.8) ++below;
  }
  const double p = max_cdf_value_distribution(n, 0.8);
  CHECK(std::abs(below / static_cast<double>(reps) - p) < 4.0 * std::sqrt(p * (1 - p) / reps));
}

TEST_CASE("q1 equivalence", "[bounds]") {
  const auto spec = DistributionSpec::exponential(1.0);
  const double q1 = tail_quantile(spec, 0.25);
  const auto hi = q1_equivalence_check(SortedSample({0.1, 0.2, 0.3, q1 + 1.0}), spec);
  CHECK(hi.max_exceeds_q1);
  CHECK(hi.ineq_at_max);
  CHECK(hi.ineq_at_q1);
  const auto lo = q1_equivalence_check(SortedSample({0.1, 0.2, 0.3, q1 - 0.5}), spec);
  CHECK(!lo.max_exceeds_q1);
  CHECK(!lo.ineq_at_max);
  CHECK(!lo.ineq_at_q1);
  CHECK_THROWS_AS(q1_equivalence_check(SortedSample({1.0}), spec), DataError);
}

TEST_CASE("q1 flags agree on random samples and cover at the predicted rate",
          "[bounds][property]") {
  Rng rng(2024);
  const int reps = 10000;
  int violations = 0;
  int covered = 0;
  const std::vector<DistributionSpec> specs{DistributionSpec::exponential(1.0),
                                            DistributionSpec::half_normal_unit_mean(),
                                            DistributionSpec::pareto_i(3.0),
                                            DistributionSpec::location_pareto(2.5, 1.0, 0.5)};
  const std::size_t n = 25;
  for (int r = 0; r < reps; ++r) {
    const auto& spec = specs[r % specs.size()];
    const auto check = q1_equivalence_check(SortedSample(sample(spec, n, rng)), spec);
    if (!check.consistent()) ++violations;
    if (check.ineq_at_q1) ++covered;
  }
  CHECK(violations == 0);
  const double p = coverage_probability(n, 1.0);
  CHECK(std::abs(covered / static_cast<double>(reps) - p) < 4.0 * std::sqrt(p * (1 - p) / reps));
}

TEST_CASE("eB at x0 implies eB beyond for Pareto", "[bounds][property]") {
  Rng rng(77);
  const auto spec = DistributionSpec::pareto_i(2.5);
  for (int r = 0; r < 300; ++r) {
    const SortedSample s(sample(spec, 30, rng));
    const double x0 = x_tail_decreasing_from(spec) + 5.0 * rng.uniform();
    if (tail(spec, x0) > empirical_bound(s, x0).bound) continue;
    for (double x = x0; x < x0 + 50.0; x += 0.25) {
      CHECK(tail(spec, x) <= empirical_bound(s, x).bound * (1.0 + 1e-12));
    }
  }
}
