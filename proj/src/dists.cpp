#include "tailbound/dists.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "tailbound/error.hpp"
#include "tailbound/normal.hpp"

namespace tailbound {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

void require_probability(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError(std::string(what) + ": probability must lie in (0, 1)");
  }
}

void require_finite_mean(const DistributionSpec& spec, const char* what) {
  if (!has_finite_mean(spec)) {
    throw InfiniteMoment(std::string(what) + ": " + spec.describe() +
                         " has no finite mean");
  }
}

void require_positive_threshold(double nu, const char* what) {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw DomainError(std::string(what) + ": threshold must be positive and finite");
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// integral_nu^inf (1 - F(x)) dx for nu at or above the support minimum.
double integrated_tail(const DistributionSpec& s, double nu) {
  switch (s.kind()) {
    case DistKind::Exponential:
      return std::exp(-s.rate() * nu) / s.rate();
    case DistKind::HalfNormal: {
      const double t = nu / s.sigma();
      return 2.0 * s.sigma() * (normal::pdf(t) - t * normal::sf(t));
    }
    case DistKind::ParetoI:
      return tail(s, nu) * nu / (s.alpha() - 1.0);
    case DistKind::LocationPareto:
      return tail(s, nu) * (nu + s.delta()) / (s.alpha() - 1.0);
  }
  return 0.0;
}

}  // namespace

std::string_view to_string(DistKind kind) {
  switch (kind) {
    case DistKind::Exponential: return "exponential";
    case DistKind::HalfNormal: return "half-normal";
    case DistKind::ParetoI: return "pareto";
    case DistKind::LocationPareto: return "location-pareto";
  }
  return "unknown";
}

DistributionSpec DistributionSpec::exponential(double rate) {
  if (!positive_finite(rate)) throw InvalidParameter("exponential: rate must be > 0");
  DistributionSpec s;
  s.kind_ = DistKind::Exponential;
  s.rate_ = rate;
  return s;
}

DistributionSpec DistributionSpec::half_normal(double sigma) {
  if (!positive_finite(sigma)) throw InvalidParameter("half-normal: sigma must be > 0");
  DistributionSpec s;
  s.kind_ = DistKind::HalfNormal;
  s.sigma_ = sigma;
  return s;
}

DistributionSpec DistributionSpec::half_normal_unit_mean() {
  return half_normal(std::sqrt(std::numbers::pi / 2.0));
}

DistributionSpec DistributionSpec::pareto_i(double alpha, double mu) {
  if (!positive_finite(alpha)) throw InvalidParameter("pareto: alpha must be > 0");
  if (!positive_finite(mu)) throw InvalidParameter("pareto: mu must be > 0");
  DistributionSpec s;
  s.kind_ = DistKind::ParetoI;
  s.alpha_ = alpha;
  s.mu_ = mu;
  return s;
}

DistributionSpec DistributionSpec::location_pareto(double alpha, double mu, double delta) {
  if (!positive_finite(alpha)) throw InvalidParameter("location-pareto: alpha must be > 0");
  if (!std::isfinite(mu) || mu < 0.0) {
    throw InvalidParameter("location-pareto: mu must be >= 0");
  }
  if (!std::isfinite(delta) || !(delta > -mu)) {
    throw InvalidParameter("location-pareto: delta must exceed -mu");
  }
  DistributionSpec s;
  s.kind_ = DistKind::LocationPareto;
  s.alpha_ = alpha;
  s.mu_ = mu;
  s.delta_ = delta;
  return s;
}

DistributionSpec DistributionSpec::gpd(double xi, double beta) {
  if (!positive_finite(xi)) throw InvalidParameter("gpd: xi must be > 0");
  if (!positive_finite(beta)) throw InvalidParameter("gpd: beta must be > 0");
  return location_pareto(1.0 / xi, 0.0, beta / xi);
}

double DistributionSpec::support_min() const noexcept {
  switch (kind_) {
    case DistKind::ParetoI:
    case DistKind::LocationPareto:
      return mu_;
    default:
      return 0.0;
  }
}

std::string DistributionSpec::describe() const {
  std::ostringstream os;
  os.precision(6);
  switch (kind_) {
    case DistKind::Exponential: os << "Exponential(rate=" << rate_ << ")"; break;
    case DistKind::HalfNormal: os << "HalfNormal(sigma=" << sigma_ << ")"; break;
    case DistKind::ParetoI: os << "ParetoI(alpha=" << alpha_ << ", mu=" << mu_ << ")"; break;
    case DistKind::LocationPareto:
      os << "LocationPareto(alpha=" << alpha_ << ", mu=" << mu_ << ", delta=" << delta_ << ")";
      break;
  }
  return os.str();
}

double pdf(const DistributionSpec& s, double x) {
  if (x < s.support_min()) return 0.0;
  switch (s.kind()) {
    case DistKind::Exponential:
      return s.rate() * std::exp(-s.rate() * x);
    case DistKind::HalfNormal:
      return 2.0 * normal::pdf(x / s.sigma()) / s.sigma();
    case DistKind::ParetoI:
      return s.alpha() / s.mu() * std::pow(s.mu() / x, s.alpha() + 1.0);
    case DistKind::LocationPareto: {
      const double scale = s.mu() + s.delta();
      return s.alpha() / scale * std::pow(scale / (x + s.delta()), s.alpha() + 1.0);
    }
  }
  return 0.0;
}

double cdf(const DistributionSpec& s, double x) {
  if (x <= s.support_min()) return 0.0;
  switch (s.kind()) {
    case DistKind::Exponential:
      return -std::expm1(-s.rate() * x);
    case DistKind::HalfNormal:
      return std::erf(x / (s.sigma() * kSqrt2));
    case DistKind::ParetoI:
      return -std::expm1(s.alpha() * std::log(s.mu() / x));
    case DistKind::LocationPareto:
      return -std::expm1(s.alpha() * std::log((s.mu() + s.delta()) / (x + s.delta())));
  }
  return 0.0;
}

double tail(const DistributionSpec& s, double x) {
  if (x <= s.support_min()) return 1.0;
  switch (s.kind()) {
    case DistKind::Exponential:
      return std::exp(-s.rate() * x);
    case DistKind::HalfNormal:
      return std::erfc(x / (s.sigma() * kSqrt2));
    case DistKind::ParetoI:
      return std::pow(s.mu() / x, s.alpha());
    case DistKind::LocationPareto:
      return std::pow((s.mu() + s.delta()) / (x + s.delta()), s.alpha());
  }
  return 1.0;
}

double quantile(const DistributionSpec& s, double p) {
  require_probability(p, "quantile");
  switch (s.kind()) {
    case DistKind::Exponential:
      return -std::log1p(-p) / s.rate();
    case DistKind::HalfNormal: {
      // Start from the upper-tail inverse, then polish against erf so that
      // small p keeps its relative accuracy.
      double x = s.sigma() * normal::upper_quantile(0.5 * (1.0 - p));
      for (int iter = 0; iter < 2; ++iter) {
        const double f = pdf(s, x);
        if (!(f > 0.0)) break;
        x -= (cdf(s, x) - p) / f;
      }
      return x;
    }
    case DistKind::ParetoI:
      return s.mu() * std::exp(-std::log1p(-p) / s.alpha());
    case DistKind::LocationPareto:
      return (s.mu() + s.delta()) * std::exp(-std::log1p(-p) / s.alpha()) - s.delta();
  }
  return 0.0;
}

double tail_quantile(const DistributionSpec& s, double q) {
  require_probability(q, "tail_quantile");
  switch (s.kind()) {
    case DistKind::Exponential:
      return -std::log(q) / s.rate();
    case DistKind::HalfNormal:
      return s.sigma() * normal::upper_quantile(0.5 * q);
    case DistKind::ParetoI:
      return s.mu() * std::pow(q, -1.0 / s.alpha());
    case DistKind::LocationPareto:
      return (s.mu() + s.delta()) * std::pow(q, -1.0 / s.alpha()) - s.delta();
  }
  return 0.0;
}

double draw(const DistributionSpec& spec, Rng& rng) { return quantile(spec, rng.uniform()); }

std::vector<double> sample(const DistributionSpec& spec, std::size_t n, Rng& rng) {
  if (n == 0) throw InvalidParameter("sample: n must be >= 1");
  std::vector<double> out(n);
  for (auto& v : out) v = draw(spec, rng);
  return out;
}

std::vector<double> sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return sample(spec, n, rng);
}

double moment(const DistributionSpec& s, int k) {
  if (k < 1) throw InvalidParameter("moment: order must be >= 1");
  switch (s.kind()) {
    case DistKind::Exponential:
      return std::tgamma(k + 1.0) / std::pow(s.rate(), k);
    case DistKind::HalfNormal:
      return std::pow(s.sigma(), k) * std::pow(2.0, 0.5 * k) * std::tgamma(0.5 * (k + 1)) /
             std::sqrt(std::numbers::pi);
    case DistKind::ParetoI:
      if (k >= s.alpha()) return kInfinite;
      return s.alpha() * std::pow(s.mu(), k) / (s.alpha() - k);
    case DistKind::LocationPareto: {
      if (k >= s.alpha()) return kInfinite;
      // X = (mu + delta) P - delta with P ~ ParetoI(alpha, 1).
      const double scale = s.mu() + s.delta();
      double sum = 0.0;
      for (int j = 0; j <= k; ++j) {
        sum += binomial(k, j) * std::pow(-s.delta(), k - j) * std::pow(scale, j) * s.alpha() /
               (s.alpha() - j);
      }
      return sum;
    }
  }
  return kInfinite;
}

double mean(const DistributionSpec& spec) { return moment(spec, 1); }

bool has_finite_mean(const DistributionSpec& s) {
  switch (s.kind()) {
    case DistKind::ParetoI:
    case DistKind::LocationPareto:
      return s.alpha() > 1.0;
    default:
      return true;
  }
}

double partial_expectation(const DistributionSpec& s, double nu) {
  require_finite_mean(s, "partial_expectation");
  if (nu <= s.support_min()) return mean(s);
  switch (s.kind()) {
    case DistKind::Exponential:
      return std::exp(-s.rate() * nu) * (nu + 1.0 / s.rate());
    case DistKind::HalfNormal: {
      const double z = nu / s.sigma();
      return s.sigma() * std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * z * z);
    }
    case DistKind::ParetoI:
      return tail(s, nu) * s.alpha() * nu / (s.alpha() - 1.0);
    case DistKind::LocationPareto:
      return tail(s, nu) * (nu + (nu + s.delta()) / (s.alpha() - 1.0));
  }
  return 0.0;
}

double improved_markov_bound(const DistributionSpec& spec, double nu) {
  require_positive_threshold(nu, "improved_markov_bound");
  return partial_expectation(spec, nu) / nu;
}

double traditional_markov_bound(const DistributionSpec& spec, double nu) {
  require_positive_threshold(nu, "traditional_markov_bound");
  require_finite_mean(spec, "traditional_markov_bound");
  return mean(spec) / nu;
}

double moment_markov_bound(const DistributionSpec& spec, double nu, int k) {
  require_positive_threshold(nu, "moment_markov_bound");
  const double m = moment(spec, k);
  if (!std::isfinite(m)) {
    throw InfiniteMoment("moment_markov_bound: moment of order " + std::to_string(k) +
                         " of " + spec.describe() + " is infinite");
  }
  return m / std::pow(nu, k);
}

double markov_error(const DistributionSpec& spec, double nu) {
  require_positive_threshold(nu, "markov_error");
  require_finite_mean(spec, "markov_error");
  const double lo = spec.support_min();
  if (nu < lo) return ((lo - nu) + integrated_tail(spec, lo)) / nu;
  return integrated_tail(spec, nu) / nu;
}

double x_tail_decreasing_from(const DistributionSpec& s) {
  require_finite_mean(s, "x_tail_decreasing_from");
  switch (s.kind()) {
    case DistKind::Exponential:
      return 1.0 / s.rate();
    case DistKind::ParetoI:
      return s.mu();
    case DistKind::LocationPareto:
      return std::max(s.mu(), s.delta() / (s.alpha() - 1.0));
    case DistKind::HalfNormal: {
      // d/dx [x (1 - F(x))] = 2 (Q(t) - t phi(t)) with t = x / sigma: positive
      // at 0, negative for large t, a single sign change in between.
      auto slope = [](double t) { return normal::sf(t) - t * normal::pdf(t); };
      double lo = 0.0;
      double hi = 10.0;
      const double tol = 1e-8 / s.sigma();
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (slope(mid) > 0.0 ? lo : hi) = mid;
      }
      return s.sigma() * 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

}  // namespace tailbound
