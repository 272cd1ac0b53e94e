// Acceptance suite: one PASS/FAIL line per criterion, details indented below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tailbound/bounds.hpp"
#include "tailbound/cli.hpp"
#include "tailbound/dists.hpp"
#include "tailbound/evtfit.hpp"
#include "tailbound/montecarlo.hpp"
#include "tailbound/returns.hpp"
#include "tailbound/rng.hpp"

using namespace tailbound;

namespace {

constexpr std::size_t kReplicates = 10000;
constexpr std::uint64_t kSeed = 1;

class Criterion {
 public:
  void check(bool ok, const std::string& what) {
    if (!ok) ++failures_;
    notes_.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { notes_.push_back("note " + what); }
  bool passed() const { return failures_ == 0 && !notes_.empty(); }
  std::size_t failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  std::size_t failures_ = 0;
  std::vector<std::string> notes_;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double round_sig(double v, int digits) {
  if (v == 0.0) return 0.0;
  const double scale = std::pow(10.0, digits - 1 - std::floor(std::log10(std::abs(v))));
  return std::round(v * scale) / scale;
}

bool within_abs(double got, double want, double tol) { return std::abs(got - want) <= tol; }
bool within_rel(double got, double want, double tol) {
  return std::abs(got - want) <= tol * std::abs(want);
}

void close_check(Criterion& c, const std::string& label, double got, double want, double tol,
                 bool relative = false) {
  const bool ok = relative ? within_rel(got, want, tol) : within_abs(got, want, tol);
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s: %.6g vs %.6g (%s %.3g)", label.c_str(), got, want,
                relative ? "rel" : "abs", tol);
  c.check(ok, buf);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1 -----------------------------------------------------------------------

Criterion analytic_examples() {
  Criterion c;
  const auto e = DistributionSpec::exponential(1.0);
  const auto h = DistributionSpec::half_normal_unit_mean();
  auto sig3 = [&](const std::string& label, double got, double want) {
    c.check(round_sig(got, 3) == want, label + ": " + fmt("%.6g rounds to %.3g", got, round_sig(got, 3)));
  };
  sig3("exponential improved nu=6.908", improved_markov_bound(e, 6.908), 1.14e-3);
  sig3("exponential traditional nu=6.908", traditional_markov_bound(e, 6.908), 0.145);
  sig3("half-normal improved nu=4.124", improved_markov_bound(h, 4.124), 1.08e-3);
  sig3("half-normal traditional nu=4.124", traditional_markov_bound(h, 4.124), 0.242);
  return c;
}

// 2 -----------------------------------------------------------------------

Criterion coverage() {
  Criterion c;
  auto dec3 = [&](const std::string& label, double got, double want) {
    c.check(std::round(got * 1000.0) == std::round(want * 1000.0),
            label + ": " + fmt("%.6f vs %.3f", got, want));
  };
  dec3("coverage(10, 5)", coverage_probability(10, 5.0), 0.999);
  dec3("limit a=1", coverage_limit(1.0), 0.632);
  dec3("limit a=3", coverage_limit(3.0), 0.950);
  dec3("limit a=5", coverage_limit(5.0), 0.993);
  close_check(c, "limit a=5 (5 decimals)", coverage_limit(5.0), 0.99326, 5e-6);
  return c;
}

// 3 -----------------------------------------------------------------------

struct Table1Ref {
  const char* name;
  DistributionSpec spec;
  std::size_t n;
  double median;
  double exceed[3];
};

Criterion table1() {
  Criterion c;
  const auto hn = DistributionSpec::half_normal_unit_mean();
  const auto ex = DistributionSpec::exponential(1.0);
  const auto p6 = DistributionSpec::pareto_i(6.0);
  const auto p4 = DistributionSpec::pareto_i(4.0);
  const auto p2 = DistributionSpec::pareto_i(2.0);
  const std::vector<Table1Ref> refs{
      {"half-normal", hn, 1000, 1.032, {0.633, 0.952, 0.994}},
      {"half-normal", hn, 100, 1.050, {0.637, 0.954, 0.995}},
      {"half-normal", hn, 10, 1.114, {0.652, 0.973, 1.000}},
      {"exponential", ex, 1000, 1.054, {0.636, 0.952, 0.994}},
      {"exponential", ex, 100, 1.080, {0.632, 0.953, 0.995}},
      {"exponential", ex, 10, 1.176, {0.653, 0.972, 0.999}},
      {"pareto a=6", p6, 1000, 1.064, {0.634, 0.951, 0.994}},
      {"pareto a=6", p6, 100, 1.064, {0.634, 0.952, 0.994}},
      {"pareto a=6", p6, 10, 1.068, {0.651, 0.973, 0.999}},
      {"pareto a=4", p4, 1000, 1.097, {0.633, 0.949, 0.994}},
      {"pareto a=4", p4, 100, 1.098, {0.635, 0.954, 0.995}},
      {"pareto a=4", p4, 10, 1.106, {0.652, 0.972, 1.000}},
      {"pareto a=2", p2, 1000, 1.201, {0.633, 0.951, 0.994}},
      {"pareto a=2", p2, 100, 1.201, {0.634, 0.952, 0.994}},
      {"pareto a=2", p2, 10, 1.221, {0.651, 0.972, 0.999}},
  };
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& r : refs) {
    SimulationConfig cfg;
    cfg.spec = r.spec;
    cfg.n = r.n;
    cfg.replicates = kReplicates;
    cfg.base_seed = kSeed;
    cfg.workers = 0;
    const auto row = run_table1(cfg);
    const std::string label = std::string(r.name) + " n=" + std::to_string(r.n);
    close_check(c, label + " median", row.scaled_bound.median, r.median, 0.03);
    for (std::size_t i = 0; i < 3; ++i) {
      close_check(c, label + " exceed a=" + fmt("%g", row.exceed[i].level), row.exceed[i].probability,
                  r.exceed[i], 0.015);
    }
  }
  const double secs = seconds_since(t0);
  c.check(secs <= 120.0, fmt("runtime %.1f s (limit 120 s)", secs));
  return c;
}

// 4 -----------------------------------------------------------------------

struct Table2Ref {
  double alpha;
  std::size_t n;
  double quantile[3];
  double median[3];
  double exceed[3];
};

Criterion table2() {
  Criterion c;
  const std::vector<Table2Ref> refs{
      {4, 1000, {5.624, 6.688, 8.409}, {1.096, 0.922, 0.733}, {0.633, 1.000, 1.000}},
      {3, 1000, {10.000, 12.600, 17.100}, {1.131, 0.898, 0.661}, {0.632, 0.983, 1.000}},
      {2, 1000, {31.623, 44.722, 70.711}, {1.197, 0.846, 0.535}, {0.633, 0.866, 0.994}},
      {4, 100, {3.163, 3.761, 4.729}, {1.097, 0.923, 0.734}, {0.633, 1.000, 1.000}},
      {3, 100, {4.642, 5.849, 7.938}, {1.131, 0.897, 0.661}, {0.634, 0.983, 1.000}},
      {2, 100, {10.000, 14.143, 22.361}, {1.203, 0.851, 0.538}, {0.635, 0.868, 0.995}},
      {4, 10, {1.779, 2.115, 2.660}, {1.105, 0.929, 0.739}, {0.652, 1.000, 1.000}},
      {3, 10, {2.155, 2.715, 3.685}, {1.142, 0.907, 0.668}, {0.652, 0.995, 1.000}},
      {2, 10, {3.163, 4.473, 7.072}, {1.223, 0.865, 0.547}, {0.651, 0.893, 1.000}},
  };
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& r : refs) {
    SimulationConfig cfg;
    cfg.spec = DistributionSpec::pareto_i(r.alpha);
    cfg.n = r.n;
    cfg.replicates = kReplicates;
    cfg.base_seed = kSeed;
    cfg.workers = 0;
    const auto cells = run_table2(cfg);
    for (std::size_t i = 0; i < 3; ++i) {
      const std::string label = fmt("alpha=%g n=%g", r.alpha, static_cast<double>(r.n)) +
                                fmt(" c=%g", cells[i].multiplier);
      // Reference quantiles are printed to 3 decimals, a few of them one unit high.
      close_check(c, label + " quantile", cells[i].quantile, r.quantile[i], 1e-3);
      close_check(c, label + " median", cells[i].median, r.median[i], 0.02);
      close_check(c, label + " exceeds", cells[i].exceed_probability, r.exceed[i], 0.015);
    }
  }
  const double secs = seconds_since(t0);
  c.check(secs <= 120.0, fmt("runtime %.1f s (limit 120 s)", secs));
  return c;
}

// 5 -----------------------------------------------------------------------

Criterion sample_sizes() {
  Criterion c;
  const auto hn = min_n_for_max_exceeding(DistributionSpec::half_normal_unit_mean(), 0.9423, 0.99);
  c.check(hn == 8, "half-normal x0=0.9423: n=" + std::to_string(hn));
  const auto ex = min_n_for_max_exceeding(DistributionSpec::exponential(1.0), 1.0, 0.99);
  c.check(ex == 10 || ex == 11, "exponential x0=1: analytic n=" + std::to_string(ex));
  const auto sim = min_n_for_max_exceeding_simulated(DistributionSpec::exponential(1.0), 1.0, 0.99,
                                                     kReplicates, kSeed);
  c.note("exponential x0=1: simulated n=" + std::to_string(sim) +
         " (1-(1-e^-1)^10 = 0.98987 falls just short of 0.99)");
  return c;
}

// 6, 7 --------------------------------------------------------------------

std::string fixture_path() {
  if (const char* env = std::getenv("TAILBOUND_DJI_CSV"); env && *env) return env;
  return TAILBOUND_DJI_FIXTURE;
}

std::optional<ReturnsSeries> load_fixture(Criterion& c) {
  const auto path = fixture_path();
  std::ifstream in(path);
  if (!in) {
    c.check(false, "DJI fixture not found at " + path + " (set TAILBOUND_DJI_CSV)");
    return std::nullopt;
  }
  try {
    return log_returns(load_prices(in));
  } catch (const std::exception& e) {
    c.check(false, std::string("fixture unreadable: ") + e.what());
    return std::nullopt;
  }
}

Criterion dji_pipeline() {
  Criterion c;
  const auto r = load_fixture(c);
  if (!r) return c;
  c.check(r->size() == 2013, "returns n=" + std::to_string(r->size()) + " (want 2013)");
  c.check(r->positive == 1081 && r->negative == 930 && r->zero == 2,
          "signs " + std::to_string(r->positive) + "/" + std::to_string(r->negative) + "/" +
              std::to_string(r->zero) + " (want 1081/930/2)");
  const auto losses = negative_losses(*r);
  close_check(c, "max daily loss", losses.maximum(), 13.842, 0.01);
  close_check(c, "second daily loss", losses.second_largest(), 10.523, 0.01);
  const double nus[] = {13.84, 15.0, 20.0};
  const double eb[] = {4.97e-4, 4.58e-4, 3.44e-4};
  const double years[] = {8.05, 8.73, 11.63};
  for (int i = 0; i < 3; ++i) {
    const double p = unconditional_bound(*r, nus[i]).bound;
    close_check(c, fmt("eB(%g)", nus[i]), p, eb[i], 0.01, true);
    close_check(c, fmt("return period at %g", nus[i]), return_period(p), years[i], 0.01, true);
  }
  const auto g = gaussian_refutation(*r, 10.0);
  close_check(c, "gaussian mu_hat", g.mu_hat, 0.031, 0.005);
  close_check(c, "gaussian sigma_hat", g.sigma_hat, 1.187, 0.005);
  c.check(std::floor(std::log10(g.prob)) == -17, fmt("gaussian prob %.3g (want order 1e-17)", g.prob));
  return c;
}

struct LpdRef {
  double mu, alpha, beta, prob20, q1;
  std::size_t n_exceed;
};
constexpr LpdRef kLpd[] = {
    {0.0, 4.825, 0.610, 2.28e-5, 9.361, 930},
    {1.4, 3.389, 0.740, 5.60e-5, 10.154, 154},
    {1.75, 2.831, 0.745, 8.44e-5, 10.805, 104},
};

Criterion lpd_fits() {
  Criterion c;
  // Reference parameters alone, independent of the fixture.
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& ref = kLpd[i];
    const auto fit = make_lpd(ref.alpha, ref.beta, ref.mu, ref.n_exceed);
    const double p = lpd_tail_prob(fit, 20.0, ref.n_exceed / 2013.0);
    const FittedTail law{fit, ref.n_exceed / 930.0};
    c.note("LPD-" + std::to_string(i + 1) + " from reference parameters: " +
           fmt("prob(20)=%.3g, ", p) + fmt("q1=%.4g (reference %.4g)", law.tail_quantile(1.0 / 930.0), ref.q1));
  }
  const auto r = load_fixture(c);
  if (!r) return c;

  AnalysisOptions opt;
  opt.thresholds = {20.0};
  opt.models.clear();
  for (const auto& ref : kLpd) opt.models.push_back(ModelRequest::parse(fmt("mu=%g", ref.mu)));
  const auto rep = full_analysis(*r, opt);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& m = rep.models[i];
    const auto& ref = kLpd[i];
    close_check(c, m.name + " alpha", m.fit.alpha, ref.alpha, 0.05, true);
    close_check(c, m.name + " beta", m.fit.beta, ref.beta, 0.05, true);
    const double p = lpd_tail_prob(m.fit, 20.0, m.exceed_fraction);
    close_check(c, m.name + " prob(20)", p, ref.prob20, 0.10, true);
    if (i == 2) close_check(c, m.name + " return period(20)", return_period(p), 47.42, 0.10, true);
    const auto& q = rep.q1_checks[i];
    close_check(c, m.name + " q1", q.check.q1, ref.q1, 0.02, true);
    c.check(q.check.q1 < q.sample_max, m.name + fmt(" q1 %.4g below max %.4g", q.check.q1, q.sample_max));
  }
  return c;
}

// 8 -----------------------------------------------------------------------

DistributionSpec random_spec(Rng& rng) {
  switch (static_cast<int>(rng.uniform() * 4.0)) {
    case 0: return DistributionSpec::exponential(0.2 + 5.0 * rng.uniform());
    case 1: return DistributionSpec::half_normal(0.2 + 5.0 * rng.uniform());
    case 2: return DistributionSpec::pareto_i(1.1 + 8.0 * rng.uniform(), 0.1 + 3.0 * rng.uniform());
    default: {
      const double mu = 3.0 * rng.uniform();
      return DistributionSpec::location_pareto(1.1 + 8.0 * rng.uniform(), mu,
                                               -0.9 * mu + 4.0 * rng.uniform());
    }
  }
}

std::string synthetic_prices(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  const auto shock = DistributionSpec::location_pareto(3.0, 0.0, 1.5);
  std::ostringstream s;
  s << "date,close\n";
  auto d = std::chrono::sys_days{std::chrono::year{2015} / 1 / 2};
  double price = 17000.0;
  for (std::size_t i = 0; i < count; ++i, d += std::chrono::days{1}) {
    s << format_date(std::chrono::year_month_day{d}) << ',' << fmt("%.2f", price) << '\n';
    price *= std::exp(0.004 * draw(shock, rng) * (rng.uniform() < 0.47 ? -1.0 : 1.0));
  }
  return s.str();
}

std::string run_cli(const std::vector<std::string>& args, const std::string& stdin_text, int& code) {
  std::ostringstream out;
  std::ostringstream err;
  std::istringstream in(stdin_text);
  code = cli::run(args, out, err, in);
  return out.str();
}

Criterion properties() {
  Criterion c;
  Rng rng(2024);

  int chain = 0;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto s = random_spec(rng);
    const double nu = quantile(s, 0.999 * rng.uniform() + 0.0005);
    const double t = tail(s, nu);
    const double imp = improved_markov_bound(s, nu);
    if (!(t <= imp * (1 + 1e-12) && imp <= traditional_markov_bound(s, nu) * (1 + 1e-12))) ++chain;
    worst = std::max(worst, std::abs(imp - t - markov_error(s, nu)));
  }
  c.check(chain == 0, "tail <= improved <= traditional on 1000 pairs: " + std::to_string(chain) +
                          " violations");
  c.check(worst < 1e-9, fmt("improved - tail - error residual %.3g (< 1e-9)", worst));

  int flags = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto s = random_spec(rng);
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 200.0);
    if (!q1_equivalence_check(SortedSample(sample(s, n, rng)), s).consistent()) ++flags;
  }
  c.check(flags == 0, "q1 three-way flags on 10000 samples: " + std::to_string(flags) + " violations");

  double eb_dev = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const SortedSample s(sample(random_spec(rng), 50, rng));
    const double k = std::exp(8.0 * rng.uniform() - 4.0);
    const double nu = 0.01 + 10.0 * rng.uniform();
    const double a = empirical_bound(s, nu).bound;
    eb_dev = std::max(eb_dev, std::abs(empirical_bound(s.scaled(k), k * nu).bound / a - 1.0));
  }
  c.check(eb_dev < 1e-12, fmt("eB scale equivariance on 1000 rescalings: max rel dev %.3g", eb_dev));

  int cv_mismatch = 0;
  for (int i = 0; i < 8; ++i) {
    const SortedSample s(sample(DistributionSpec::location_pareto(2.0 + 4.0 * rng.uniform(), 0.0, 1.0),
                                300, rng));
    const double k = std::exp(6.0 * rng.uniform() - 3.0);
    CvOptions opt;
    opt.bootstrap = 200;
    opt.seed = 100 + i;
    opt.policy = i % 2 ? ScanMethod::CvBest : ScanMethod::CvLowest;
    if (select_threshold_cv(s, opt).selected != select_threshold_cv(s.scaled(k), opt).selected) {
      ++cv_mismatch;
    }
  }
  c.check(cv_mismatch == 0, "CV threshold choice invariant on 8 rescalings: " +
                                std::to_string(cv_mismatch) + " mismatches");

  const auto prices = synthetic_prices(600, 9);
  std::ostringstream losses;
  for (double v : sample(DistributionSpec::pareto_i(3.0), 400, 5)) losses << fmt("%.17g", v) << '\n';
  const std::vector<std::pair<std::vector<std::string>, std::string>> runs{
      {{"--replicates", "2000", "simulate", "table1", "--kind", "exponential", "--n", "10,100"}, ""},
      {{"--replicates", "2000", "simulate", "table2", "--kind", "pareto", "--alpha", "3"}, ""},
      {{"--replicates", "2000", "dist", "--kind", "exponential", "--min-n-at", "1"}, ""},
      {{"--seed", "3", "fit", "--input", "-", "--method", "cv-lowest", "--bootstrap", "100"},
       losses.str()},
      {{"analyze", "--prices", "-", "--bootstrap", "100", "--emit-plot-data", "-"}, prices},
  };
  for (const auto& [args, input] : runs) {
    int c1 = 0;
    int c2 = 0;
    const auto a = run_cli(args, input, c1);
    const auto b = run_cli(args, input, c2);
    std::string label;
    for (const auto& s : args) label += (label.empty() ? "" : " ") + s;
    c.check(c1 == 0 && c2 == 0 && a == b && !a.empty(), "byte-identical reruns: " + label);
  }
  return c;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    std::function<Criterion()> run;
  };
  const std::vector<Entry> entries{
      {"1 analytic bound examples", analytic_examples},
      {"2 coverage probabilities", coverage},
      {"3 table 1 reproduction (1e4 replicates)", table1},
      {"4 table 2 reproduction (1e4 replicates)", table2},
      {"5 minimum sample sizes", sample_sizes},
      {"6 DJI pipeline on the fixture", dji_pipeline},
      {"7 LPD fits on the fixture", lpd_fits},
      {"8 property suites and determinism", properties},
  };
  std::size_t passed = 0;
  for (const auto& e : entries) {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c;
    try {
      c = e.run();
    } catch (const std::exception& ex) {
      c.check(false, std::string("exception: ") + ex.what());
    }
    const bool ok = c.passed();
    if (ok) ++passed;
    std::printf("%s  criterion %s  [%.1f s]\n", ok ? "PASS" : "FAIL", e.name, seconds_since(t0));
    for (const auto& n : c.notes()) std::printf("        %s\n", n.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", passed, entries.size());
  return passed == entries.size() ? 0 : 1;
}
