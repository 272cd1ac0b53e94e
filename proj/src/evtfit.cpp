#include "tailbound/evtfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "tailbound/error.hpp"
#include "tailbound/rng.hpp"
#include "tailbound/stats.hpp"

namespace tailbound {

namespace {

constexpr double kXiZero = 1e-12;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Root of (1 + xi) sum y / (beta + xi y) = k in beta: the likelihood
// equation for the scale at fixed shape. The left side decreases in beta, so
// the root is unique on beta > max(0, -xi ymax).
double solve_scale(std::span<const double> y, double ymax, double xi) {
  const double k = static_cast<double>(y.size());
  auto g = [&](double beta) {
    double s = 0.0;
    for (double v : y) s += v / (beta + xi * v);
    return (1.0 + xi) * s - k;
  };
  const double floor = xi < 0.0 ? -xi * ymax : 0.0;
  double lo = floor > 0.0 ? floor * (1.0 + 1e-12) : 1e-12;
  double glo = g(lo);
  while (!(glo > 0.0) && lo > 1e-300) {
    lo = floor > 0.0 ? floor + 0.5 * (lo - floor) : 0.5 * lo;
    glo = g(lo);
  }
  double hi = std::max(1.0, 2.0 * floor);
  double ghi = g(hi);
  while (ghi >= 0.0) {
    hi *= 2.0;
    ghi = g(hi);
  }
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(
      g, lo, hi, glo, ghi, boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (r.first + r.second);
}

double profile_loglik(std::span<const double> y, double ymax, double xi) {
  if (std::abs(xi) < kXiZero) {
    const double m = sample_mean(y);
    return gpd_loglik(y, 0.0, m);
  }
  return gpd_loglik(y, xi, solve_scale(y, ymax, xi));
}

std::vector<double> xi_grid() {
  std::vector<double> g;
  for (double x = -0.98; x < 2.0; x += 0.05) g.push_back(x);
  for (double x = 2.0; x < kXiUpper; x += 0.25) g.push_back(x);
  g.push_back(kXiUpper - 0.01);
  return g;
}

GpdFit to_fit(double mu, const GpdMle& m, std::size_t n_exceed) {
  GpdFit f;
  f.mu = mu;
  f.xi = m.xi;
  f.beta = m.beta;
  f.alpha = m.xi > 0.0 ? 1.0 / m.xi : kInfinite;
  f.n_exceed = n_exceed;
  f.loglik = m.loglik;
  f.converged = m.converged;
  return f;
}

std::vector<double> exceedances_over(const SortedSample& sample, double mu) {
  const auto v = sample.values();
  auto first = std::upper_bound(v.begin(), v.end(), mu);
  std::vector<double> y;
  y.reserve(static_cast<std::size_t>(v.end() - first));
  for (auto it = first; it != v.end(); ++it) y.push_back(*it - mu);
  return y;
}

double bootstrap_p_value(double observed, std::span<const double> replicated) {
  const auto ge = std::count_if(replicated.begin(), replicated.end(),
                                [&](double t) { return t >= observed; });
  const auto le = std::count_if(replicated.begin(), replicated.end(),
                                [&](double t) { return t <= observed; });
  const double p = 2.0 * static_cast<double>(std::min(ge, le)) /
                   static_cast<double>(replicated.size());
  return std::min(1.0, p);
}

}  // namespace

double gpd_tail(double y, double xi, double beta) {
  if (y <= 0.0) return 1.0;
  if (std::abs(xi) < kXiZero) return std::exp(-y / beta);
  const double t = xi * y / beta;
  if (t <= -1.0) return 0.0;
  return std::exp(-std::log1p(t) / xi);
}

double gpd_cdf(double y, double xi, double beta) {
  if (y <= 0.0) return 0.0;
  if (std::abs(xi) < kXiZero) return -std::expm1(-y / beta);
  const double t = xi * y / beta;
  if (t <= -1.0) return 1.0;
  return -std::expm1(-std::log1p(t) / xi);
}

double gpd_tail_quantile(double q, double xi, double beta) {
  if (!(q > 0.0 && q <= 1.0)) throw DomainError("gpd_tail_quantile: q must lie in (0, 1]");
  if (std::abs(xi) < kXiZero) return -beta * std::log(q);
  return beta * std::expm1(-xi * std::log(q)) / xi;
}

double gpd_loglik(std::span<const double> y, double xi, double beta) {
  if (!(beta > 0.0)) return kNegInf;
  const double k = static_cast<double>(y.size());
  if (std::abs(xi) < kXiZero) {
    double s = 0.0;
    for (double v : y) s += v;
    return -k * std::log(beta) - s / beta;
  }
  double s = 0.0;
  for (double v : y) {
    const double t = xi * v / beta;
    if (t <= -1.0) return kNegInf;
    s += std::log1p(t);
  }
  return -k * std::log(beta) - (1.0 + 1.0 / xi) * s;
}

GpdMle fit_gpd_mle(std::span<const double> y) {
  if (y.size() < 2) throw DataError("fit_gpd_mle: need at least 2 exceedances");
  for (double v : y) {
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw DataError("fit_gpd_mle: exceedances must be positive and finite");
    }
  }
  const auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
  if (*lo_it == *hi_it) throw DataError("fit_gpd_mle: degenerate input (all values equal)");

  // Work on y / mean so the optimizer sees unit scale.
  const double scale = sample_mean(y);
  std::vector<double> z(y.begin(), y.end());
  for (double& v : z) v /= scale;
  const double zmax = *hi_it / scale;

  const auto grid = xi_grid();
  std::size_t best = 0;
  double best_ll = kNegInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double ll = profile_loglik(z, zmax, grid[i]);
    if (ll > best_ll) {
      best_ll = ll;
      best = i;
    }
  }
  if (!std::isfinite(best_ll)) throw ConvergenceError("fit_gpd_mle: likelihood is not finite");

  const double a = best == 0 ? kXiLower + 1e-9 : grid[best - 1];
  const double b = best + 1 == grid.size() ? kXiUpper - 1e-9 : grid[best + 1];
  std::uintmax_t iters = 500;
  const auto [xi_hat, neg_ll] = boost::math::tools::brent_find_minima(
      [&](double xi) { return -profile_loglik(z, zmax, xi); }, a, b, 28, iters);

  GpdMle out;
  out.converged = iters < 500;
  double ll = -neg_ll;
  double xi = xi_hat;
  if (best_ll > ll) {
    ll = best_ll;
    xi = grid[best];
  }
  const double ll_exp = profile_loglik(z, zmax, 0.0);
  if (ll_exp >= ll) {
    xi = 0.0;
    ll = ll_exp;
  }
  out.xi = xi;
  out.beta = (std::abs(xi) < kXiZero ? 1.0 : solve_scale(z, zmax, xi)) * scale;
  out.loglik = ll - static_cast<double>(y.size()) * std::log(scale);
  out.at_boundary = xi - kXiLower < 1e-6 || kXiUpper - xi < 1e-6;
  return out;
}

double GpdFit::tail(double x) const { return gpd_tail(x - mu, xi, beta); }

double GpdFit::tail_quantile(double q) const { return mu + gpd_tail_quantile(q, xi, beta); }

DistributionSpec GpdFit::as_location_pareto() const {
  if (!(xi > 0.0)) throw DomainError("as_location_pareto: needs xi > 0");
  return DistributionSpec::location_pareto(1.0 / xi, mu, beta / xi - mu);
}

GpdFit fit_lpd(const SortedSample& sample, double mu) {
  if (!std::isfinite(mu) || mu < 0.0) throw DomainError("fit_lpd: threshold must be >= 0");
  const auto y = exceedances_over(sample, mu);
  if (y.size() < 2) {
    throw DataError("fit_lpd: fewer than 2 observations above mu = " + std::to_string(mu));
  }
  return to_fit(mu, fit_gpd_mle(y), y.size());
}

GpdFit make_lpd(double alpha, double beta, double mu, std::size_t n_exceed) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw InvalidParameter("make_lpd: alpha, beta must be > 0");
  GpdFit f;
  f.mu = mu;
  f.alpha = alpha;
  f.xi = 1.0 / alpha;
  f.beta = beta;
  f.n_exceed = n_exceed;
  f.loglik = std::numeric_limits<double>::quiet_NaN();
  f.converged = true;
  return f;
}

double FittedTail::tail(double x) const {
  if (x < fit.mu) throw DomainError("FittedTail: defined only above the threshold");
  return exceed_fraction * fit.tail(x);
}

double FittedTail::tail_quantile(double q) const {
  if (!(q > 0.0 && q <= exceed_fraction)) {
    throw DomainError("FittedTail: tail probability above the exceedance fraction");
  }
  return fit.tail_quantile(q / exceed_fraction);
}

double fit_hill(const SortedSample& sample, double mu) {
  if (!(mu > 0.0)) throw DomainError("fit_hill: threshold must be > 0");
  const auto v = sample.values();
  auto first = std::upper_bound(v.begin(), v.end(), mu);
  const auto k = static_cast<double>(v.end() - first);
  if (k < 2) throw DataError("fit_hill: need at least 2 observations above mu");
  double s = 0.0;
  for (auto it = first; it != v.end(); ++it) s += std::log(*it / mu);
  return k / s;
}

double ks_distance(std::span<const double> sorted_values,
                   const std::function<double(double)>& cdf) {
  if (sorted_values.empty()) throw DataError("ks_distance: no values");
  const double k = static_cast<double>(sorted_values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted_values.size(); ++i) {
    const double f = cdf(sorted_values[i]);
    d = std::max({d, static_cast<double>(i + 1) / k - f, f - static_cast<double>(i) / k});
  }
  return d;
}

double ks_distance(std::span<const double> sorted_exceedances, const GpdFit& fit) {
  return ks_distance(sorted_exceedances,
                     [&](double y) { return gpd_cdf(y, fit.xi, fit.beta); });
}

double residual_cv(std::span<const double> values) {
  const double m = sample_mean(values);
  if (!(m > 0.0)) throw DataError("residual_cv: mean must be positive");
  return sample_sd(values) / m;
}

std::string_view to_string(ScanMethod method) {
  switch (method) {
    case ScanMethod::ClausetKs: return "clauset-ks";
    case ScanMethod::CvLowest: return "cv-lowest";
    case ScanMethod::CvBest: return "cv-best";
  }
  return "unknown";
}

const ThresholdCandidate& ThresholdScan::chosen() const {
  if (!selected) throw DataError("threshold scan: no threshold qualified");
  return candidates.at(*selected);
}

ThresholdScan select_threshold_clauset(const SortedSample& sample, const ClausetOptions& options) {
  const auto v = sample.values();
  const std::size_t n = v.size();
  if (n < 10) throw DataError("select_threshold_clauset: need at least 10 observations");

  std::vector<double> grid = options.grid;
  if (grid.empty()) {
    const std::size_t limit = n > options.keep_top ? n - options.keep_top : 0;
    for (std::size_t i = 0; i < limit; ++i) {
      if (v[i] > 0.0 && (grid.empty() || v[i] > grid.back())) grid.push_back(v[i]);
    }
  } else {
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  }

  // Suffix sums of log x make each Hill estimate O(1).
  std::vector<double> log_suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    log_suffix[i] = log_suffix[i + 1] + (v[i] > 0.0 ? std::log(v[i]) : 0.0);
  }

  ThresholdScan scan;
  scan.method = ScanMethod::ClausetKs;
  for (double mu : grid) {
    if (!(mu > 0.0)) continue;
    const auto j = static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), mu) - v.begin());
    const std::size_t k = n - j;
    if (k < 2) continue;
    const double dk = static_cast<double>(k);
    const double alpha = dk / (log_suffix[j] - dk * std::log(mu));
    double d = 0.0;
    for (std::size_t i = j; i < n; ++i) {
      const double f = -std::expm1(-alpha * std::log(v[i] / mu));
      const double r = static_cast<double>(i - j);
      d = std::max({d, (r + 1.0) / dk - f, f - r / dk});
    }
    ThresholdCandidate c;
    c.mu = mu;
    c.n_exceed = k;
    c.alpha = alpha;
    c.xi = 1.0 / alpha;
    c.beta = mu / alpha;
    c.statistic = d;
    scan.candidates.push_back(c);
  }
  if (scan.candidates.empty()) throw DataError("select_threshold_clauset: no admissible threshold");

  std::size_t best = 0;
  for (std::size_t i = 1; i < scan.candidates.size(); ++i) {
    if (scan.candidates[i].statistic < scan.candidates[best].statistic) best = i;
  }
  scan.selected = best;
  return scan;
}

std::vector<double> CvOptions::default_levels() {
  std::vector<double> levels;
  for (int i = 0; i <= 18; ++i) levels.push_back(0.05 * i);
  return levels;
}

ThresholdScan select_threshold_cv(const SortedSample& sample, const CvOptions& options) {
  if (sample.size() < 20) throw DataError("select_threshold_cv: need at least 20 observations");
  if (options.policy == ScanMethod::ClausetKs) {
    throw InvalidParameter("select_threshold_cv: policy must be cv-lowest or cv-best");
  }
  if (options.bootstrap < 1) throw InvalidParameter("select_threshold_cv: bootstrap must be >= 1");

  ThresholdScan scan;
  scan.method = options.policy;
  std::vector<double> replicated(options.bootstrap);
  std::vector<double> draws;
  for (std::size_t li = 0; li < options.levels.size(); ++li) {
    const double level = options.levels[li];
    const double mu = level == 0.0 ? 0.0 : nearest_rank_quantile(sample.values(), level);
    if (!scan.candidates.empty() && mu <= scan.candidates.back().mu) continue;
    auto y = exceedances_over(sample, mu);
    if (y.size() < std::max<std::size_t>(options.min_exceed, 2)) continue;
    if (y.front() == y.back()) continue;

    const GpdMle mle = fit_gpd_mle(y);
    const double observed = residual_cv(y);
    Rng rng = Rng::stream(options.seed, li);
    draws.resize(y.size());
    for (double& t : replicated) {
      for (double& d : draws) d = gpd_tail_quantile(rng.uniform(), mle.xi, mle.beta);
      t = residual_cv(draws);
    }

    ThresholdCandidate c;
    c.mu = mu;
    c.n_exceed = y.size();
    c.xi = mle.xi;
    c.beta = mle.beta;
    c.alpha = mle.xi > 0.0 ? 1.0 / mle.xi : kInfinite;
    c.statistic = observed;
    c.p_value = bootstrap_p_value(observed, replicated);
    scan.candidates.push_back(c);
  }
  if (scan.candidates.empty()) throw DataError("select_threshold_cv: no admissible threshold");

  if (options.policy == ScanMethod::CvLowest) {
    for (std::size_t i = 0; i < scan.candidates.size(); ++i) {
      if (*scan.candidates[i].p_value > options.p_threshold) {
        scan.selected = i;
        break;
      }
    }
  } else {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scan.candidates.size(); ++i) {
      if (*scan.candidates[i].p_value > *scan.candidates[best].p_value) best = i;
    }
    scan.selected = best;
  }
  return scan;
}

double lpd_tail_prob(const GpdFit& fit, double nu, double exceed_fraction) {
  if (!(nu >= fit.mu)) throw DomainError("lpd_tail_prob: nu must be >= the fitted threshold");
  if (!(exceed_fraction > 0.0 && exceed_fraction <= 1.0)) {
    throw DomainError("lpd_tail_prob: exceedance fraction must lie in (0, 1]");
  }
  return exceed_fraction * fit.tail(nu);
}

double return_period(double prob, double trading_days_per_year) {
  if (!(prob > 0.0)) throw DomainError("return_period: probability must be > 0");
  if (!(trading_days_per_year > 0.0)) throw DomainError("return_period: days per year must be > 0");
  return 1.0 / (prob * trading_days_per_year);
}

}  // namespace tailbound
