#include "tailbound/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "tailbound/bounds.hpp"
#include "tailbound/dists.hpp"
#include "tailbound/error.hpp"
#include "tailbound/evtfit.hpp"
#include "tailbound/io.hpp"
#include "tailbound/montecarlo.hpp"
#include "tailbound/returns.hpp"

namespace tailbound::cli {

namespace {

struct SpecFlags {
  std::string kind;
  double rate = 1.0;
  double sigma = 1.0;
  bool unit_mean = false;
  double alpha = 0.0;
  std::optional<double> mu;
  double delta = 0.0;
  double xi = 0.0;
  double beta = 1.0;

  void attach(CLI::App* app) {
    app->add_option("--kind", kind, "exponential | half-normal | pareto | location-pareto | gpd")
        ->required()
        ->check(CLI::IsMember({"exponential", "half-normal", "pareto", "location-pareto", "gpd"}));
    app->add_option("--rate", rate, "exponential rate")->capture_default_str();
    app->add_option("--sigma", sigma, "half-normal scale")->capture_default_str();
    app->add_flag("--unit-mean", unit_mean, "half-normal scaled to unit mean");
    app->add_option("--alpha", alpha, "Pareto tail index");
    app->add_option("--mu", mu, "Pareto minimum (default 1) or location-Pareto minimum (default 0)");
    app->add_option("--delta", delta, "location-Pareto origin shift")->capture_default_str();
    app->add_option("--xi", xi, "GPD shape");
    app->add_option("--beta", beta, "GPD scale")->capture_default_str();
  }

  DistributionSpec build() const {
    if (kind == "exponential") return DistributionSpec::exponential(rate);
    if (kind == "half-normal") {
      return unit_mean ? DistributionSpec::half_normal_unit_mean() : DistributionSpec::half_normal(sigma);
    }
    if (kind == "pareto") return DistributionSpec::pareto_i(alpha, mu.value_or(1.0));
    if (kind == "location-pareto") return DistributionSpec::location_pareto(alpha, mu.value_or(0.0), delta);
    return DistributionSpec::gpd(xi, beta);
  }
};

struct Globals {
  std::uint64_t seed = kDefaultSeed;
  std::string format = "csv";
  std::size_t replicates = kDefaultReplicates;
  int precision = 4;
  unsigned workers = 0;

  OutputOptions output() const { return {parse_format(format), precision, seed}; }
};

class InputSource {
 public:
  InputSource(const std::string& path, std::istream& stdin_stream) {
    if (path == "-") {
      stream_ = &stdin_stream;
      return;
    }
    file_ = std::make_unique<std::ifstream>(path);
    if (!*file_) throw DataError("cannot open '" + path + "'");
    stream_ = file_.get();
  }
  std::istream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::istream* stream_ = nullptr;
};

// Infinite moments print as inf rather than aborting the whole table.
Cell guarded(const std::function<double()>& f) {
  try {
    return f();
  } catch (const InfiniteMoment&) {
    return std::numeric_limits<double>::infinity();
  }
}

Cell opt_cell(const std::optional<double>& v) {
  return v ? Cell{*v} : Cell{};
}

Cell count_cell(std::size_t v) { return static_cast<long long>(v); }

std::string level_name(const char* prefix, double v) { return prefix + format_number(v, 6); }

// dist -----------------------------------------------------------------

struct DistFlags {
  SpecFlags spec;
  std::vector<double> at;
  std::vector<double> p;
  int k = 2;
  std::optional<double> min_n_at;
  double confidence = 0.99;
};

std::vector<Table> run_dist(const DistFlags& f, const Globals& g) {
  const auto spec = f.spec.build();
  std::vector<Table> tables;

  Table info{"distribution", {"distribution", "support_min", "mean", "x_tail_decreasing"}, {}};
  info.rows.push_back({spec.describe(), spec.support_min(), guarded([&] { return mean(spec); }),
                       guarded([&] { return x_tail_decreasing_from(spec); })});
  tables.push_back(std::move(info));

  if (!f.at.empty()) {
    Table t{"evaluate",
            {"x", "pdf", "cdf", "tail", "partial_expectation", "improved_markov",
             "traditional_markov", "moment_markov", "k", "markov_error"},
            {}};
    for (double x : f.at) {
      const bool positive = x > 0.0;
      t.rows.push_back({x, pdf(spec, x), cdf(spec, x), tail(spec, x),
                        guarded([&] { return partial_expectation(spec, x); }),
                        positive ? guarded([&] { return improved_markov_bound(spec, x); }) : Cell{},
                        positive ? guarded([&] { return traditional_markov_bound(spec, x); }) : Cell{},
                        positive ? guarded([&] { return moment_markov_bound(spec, x, f.k); }) : Cell{},
                        static_cast<long long>(f.k),
                        positive ? guarded([&] { return markov_error(spec, x); }) : Cell{}});
    }
    tables.push_back(std::move(t));
  }

  if (!f.p.empty()) {
    Table t{"quantiles", {"p", "quantile"}, {}};
    for (double p : f.p) t.rows.push_back({p, quantile(spec, p)});
    tables.push_back(std::move(t));
  }

  if (f.min_n_at) {
    const auto analytic = min_n_for_max_exceeding(spec, *f.min_n_at, f.confidence);
    const auto simulated = min_n_for_max_exceeding_simulated(spec, *f.min_n_at, f.confidence,
                                                             g.replicates, g.seed);
    Table t{"min_n", {"x0", "confidence", "n_analytic", "n_simulated", "replicates"}, {}};
    t.rows.push_back({*f.min_n_at, f.confidence, count_cell(analytic), count_cell(simulated),
                      count_cell(g.replicates)});
    tables.push_back(std::move(t));
  }
  return tables;
}

// bound ----------------------------------------------------------------

struct BoundFlags {
  std::string input;
  std::vector<double> nu;
  std::optional<double> a;
};

std::vector<Table> run_bound(const BoundFlags& f, std::istream& in) {
  InputSource src(f.input, in);
  const SortedSample sample(read_sample(src.get()));
  Table t{"bounds", {"nu", "method", "bound", "n", "sample_max", "k", "a", "below_maximum"}, {}};
  auto add = [&](const TailBoundReport& r) {
    t.rows.push_back({r.threshold, std::string(to_string(r.method)), r.bound, count_cell(r.n),
                      r.sample_max, count_cell(r.k), r.a, r.below_maximum});
  };
  for (double nu : f.nu) {
    add(empirical_bound(sample, nu));
    if (f.a) add(scaled_bound(sample, nu, *f.a));
    add(partial_mean_bound(sample, nu));
  }
  return {t};
}

// simulate -------------------------------------------------------------

struct SimulateFlags {
  std::string table;
  SpecFlags spec;
  std::vector<std::size_t> n{100};
  std::vector<double> a_levels{1.0, 3.0, 5.0};
  std::vector<double> multipliers{1.0, 0.5, 0.2};
};

std::vector<Table> run_simulate(const SimulateFlags& f, const Globals& g) {
  const auto spec = f.spec.build();
  SimulationConfig cfg;
  cfg.spec = spec;
  cfg.replicates = g.replicates;
  cfg.base_seed = g.seed;
  cfg.workers = g.workers;
  cfg.a_levels = f.a_levels;
  cfg.tail_multipliers = f.multipliers;

  if (f.table == "table1") {
    Table t{"table1",
            {"distribution", "n", "replicates", "q1", "min", "q01", "median", "q99", "max", "mean"},
            {}};
    for (double a : f.a_levels) t.columns.push_back(level_name("p_exceed_a", a));
    for (double a : f.a_levels) t.columns.push_back(level_name("coverage_a", a));
    for (std::size_t n : f.n) {
      cfg.n = n;
      const auto row = run_table1(cfg);
      std::vector<Cell> cells{spec.describe(), count_cell(n), count_cell(row.replicates), row.q1,
                              row.scaled_bound.min, row.scaled_bound.q01, row.scaled_bound.median,
                              row.scaled_bound.q99, row.scaled_bound.max, row.scaled_bound.mean};
      for (const auto& e : row.exceed) cells.emplace_back(e.probability);
      for (double a : f.a_levels) cells.emplace_back(coverage_probability(n, a));
      t.rows.push_back(std::move(cells));
    }
    return {t};
  }

  Table t{"table2",
          {"distribution", "n", "replicates", "c", "p", "quantile", "median", "exceed_probability"},
          {}};
  for (std::size_t n : f.n) {
    cfg.n = n;
    for (const auto& cell : run_table2(cfg)) {
      t.rows.push_back({spec.describe(), count_cell(n), count_cell(cell.replicates), cell.multiplier,
                        cell.probability, cell.quantile, cell.median, cell.exceed_probability});
    }
  }
  return {t};
}

// fit ------------------------------------------------------------------

struct FitFlags {
  std::string input;
  std::string method = "clauset";
  double mu = 0.0;
  std::size_t bootstrap = 500;
  double p_threshold = 0.10;
};

Table scan_table(const ThresholdScan& scan) {
  Table t{"scan", {"mu", "n_exceed", "xi", "beta", "alpha", "statistic", "p_value", "selected"}, {}};
  for (std::size_t i = 0; i < scan.candidates.size(); ++i) {
    const auto& c = scan.candidates[i];
    t.rows.push_back({c.mu, count_cell(c.n_exceed), c.xi, c.beta, c.alpha, c.statistic,
                      opt_cell(c.p_value), scan.selected == i});
  }
  return t;
}

std::vector<Table> run_fit(const FitFlags& f, const Globals& g, std::istream& in) {
  InputSource src(f.input, in);
  const SortedSample sample(read_sample(src.get()));
  std::vector<Table> tables;
  double mu = f.mu;
  if (f.method == "clauset") {
    const auto scan = select_threshold_clauset(sample);
    tables.push_back(scan_table(scan));
    mu = scan.chosen().mu;
  } else if (f.method != "fixed") {
    CvOptions opt;
    opt.policy = f.method == "cv-lowest" ? ScanMethod::CvLowest : ScanMethod::CvBest;
    opt.p_threshold = f.p_threshold;
    opt.bootstrap = f.bootstrap;
    opt.seed = g.seed;
    const auto scan = select_threshold_cv(sample, opt);
    tables.push_back(scan_table(scan));
    mu = scan.chosen().mu;
  }

  const auto fit = fit_lpd(sample, mu);
  std::vector<double> y;
  for (double x : sample.values()) {
    if (x > mu) y.push_back(x - mu);
  }
  Table t{"fit",
          {"method", "mu", "n_exceed", "xi", "beta", "alpha", "loglik", "ks", "hill_alpha"},
          {}};
  t.rows.push_back({f.method, fit.mu, count_cell(fit.n_exceed), fit.xi, fit.beta, fit.alpha,
                    fit.loglik, ks_distance(y, fit),
                    mu > 0.0 ? Cell{fit_hill(sample, mu)} : Cell{}});
  tables.push_back(std::move(t));
  return tables;
}

// analyze --------------------------------------------------------------

struct AnalyzeFlags {
  std::string prices;
  std::vector<double> thresholds = default_analysis_thresholds();
  std::vector<std::string> models{"cv-lowest", "cv-best", "clauset"};
  std::string plot_path;
  std::vector<double> plot_range{4.5, 20.0};
  std::size_t plot_points = 311;
  std::size_t loss_k = 8;
  double gaussian_threshold = 10.0;
  std::size_t bootstrap = 500;
};

std::vector<Table> run_analyze(const AnalyzeFlags& f, const Globals& g, std::istream& in) {
  AnalysisOptions opt;
  opt.thresholds = f.thresholds;
  opt.models.clear();
  for (const auto& m : f.models) opt.models.push_back(ModelRequest::parse(m));
  opt.cv.seed = g.seed;
  opt.cv.bootstrap = f.bootstrap;
  opt.gaussian_threshold = f.gaussian_threshold;
  opt.loss_table_k = f.loss_k;

  InputSource src(f.prices, in);
  const auto returns = log_returns(load_prices(src.get()));
  const auto rep = full_analysis(returns, opt);

  std::vector<Table> tables;
  Table summary{"summary",
                {"n_returns", "positive", "negative", "zero", "max_loss", "second_loss"},
                {}};
  summary.rows.push_back({count_cell(rep.n_total), count_cell(rep.positive), count_cell(rep.negative),
                          count_cell(rep.zero), rep.max_loss, rep.second_loss});
  tables.push_back(std::move(summary));

  Table losses{"losses", {"granularity", "rank", "date", "loss"}, {}};
  for (const auto& lt : rep.loss_tables) {
    for (const auto& r : lt.rows) {
      losses.rows.push_back({std::string(to_string(lt.granularity)), count_cell(r.rank),
                             format_date(r.date), r.loss});
    }
  }
  tables.push_back(std::move(losses));

  Table gauss{"gaussian", {"threshold", "mu_hat", "sigma_hat", "prob", "return_period_years"}, {}};
  gauss.rows.push_back({rep.gaussian.threshold, rep.gaussian.mu_hat, rep.gaussian.sigma_hat,
                        rep.gaussian.prob, rep.gaussian.return_period_years});
  tables.push_back(std::move(gauss));

  Table models{"models",
               {"model", "selection", "mu", "n_exceed", "alpha", "beta", "xi", "loglik"},
               {}};
  for (const auto& m : rep.models) {
    models.rows.push_back({m.name, m.request.describe(), m.fit.mu, count_cell(m.fit.n_exceed),
                           m.fit.alpha, m.fit.beta, m.fit.xi, m.fit.loglik});
  }
  tables.push_back(std::move(models));

  Table probs{"probabilities",
              {"model", "nu", "probability", "expected_count", "return_period_years"},
              {}};
  for (const auto& r : rep.rows) {
    probs.rows.push_back({r.model, r.nu, r.probability, r.expected_count, r.return_period_years});
  }
  tables.push_back(std::move(probs));

  Table q1{"q1_check",
           {"model", "q1", "sample_max", "max_exceeds_q1", "tail_at_max_le_1_over_n",
            "tail_at_q1_le_eB", "consistent"},
           {}};
  for (const auto& c : rep.q1_checks) {
    q1.rows.push_back({c.model, c.check.q1, c.sample_max, c.check.max_exceeds_q1,
                       c.check.ineq_at_max, c.check.ineq_at_q1, c.check.consistent()});
  }
  tables.push_back(std::move(q1));

  if (!f.plot_path.empty()) {
    if (f.plot_range.size() != 2) throw InvalidParameter("--plot-range takes two values");
    const auto plot = emit_tail_plot_data(returns, rep.models, f.plot_range[0], f.plot_range[1],
                                          f.plot_points);
    Table pt{"tail_plot", {"nu", "empirical"}, {}};
    for (const auto& name : plot.model_names) {
      std::string col = name;
      for (auto& ch : col) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      col.erase(std::remove(col.begin(), col.end(), '-'), col.end());
      pt.columns.push_back(col);
    }
    pt.columns.push_back("eb");
    for (const auto& r : plot.rows) {
      std::vector<Cell> cells{r.nu, r.empirical};
      for (double v : r.lpd) cells.emplace_back(v);
      cells.push_back(opt_cell(r.eb));
      pt.rows.push_back(std::move(cells));
    }
    OutputOptions po = g.output();
    po.format = Format::Csv;
    if (f.plot_path == "-") {
      tables.push_back(std::move(pt));
    } else {
      std::ofstream file(f.plot_path);
      if (!file) throw DataError("cannot write '" + f.plot_path + "'");
      const Table one[] = {pt};
      write_tables(file, one, po);
    }
  }
  return tables;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in) {
  CLI::App app{"Tail probability bounds from the sample maximum, with EVT comparisons",
               "tailbound"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));

  Globals g;
  app.add_option("--seed", g.seed, "base seed for every random stream")->capture_default_str();
  app.add_option("--format", g.format, "csv | tsv | json")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "tsv", "json"}));
  app.add_option("--replicates", g.replicates, "Monte Carlo replicates")->capture_default_str();
  app.add_option("--precision", g.precision, "significant digits")
      ->capture_default_str()
      ->check(CLI::Range(1, 17));
  app.add_option("--workers", g.workers, "simulation threads (0 = hardware)")->capture_default_str();

  DistFlags dist;
  auto* dist_cmd = app.add_subcommand("dist", "evaluate a named distribution and its Markov bounds");
  dist.spec.attach(dist_cmd);
  dist_cmd->add_option("--at", dist.at, "evaluation points")->delimiter(',');
  dist_cmd->add_option("--p", dist.p, "probabilities for the quantile function")->delimiter(',');
  dist_cmd->add_option("--k", dist.k, "moment order for the moment bound")->capture_default_str();
  dist_cmd->add_option("--min-n-at", dist.min_n_at, "x0 for the sample size with max > x0");
  dist_cmd->add_option("--confidence", dist.confidence, "confidence for --min-n-at")
      ->capture_default_str();

  BoundFlags bound;
  auto* bound_cmd = app.add_subcommand("bound", "empirical bounds on a sample file");
  bound_cmd->add_option("--input", bound.input, "sample file, '-' for stdin")->required();
  bound_cmd->add_option("--nu", bound.nu, "thresholds")->required()->delimiter(',');
  bound_cmd->add_option("--a", bound.a, "scale factor for the scaled bound (>= 1)");

  SimulateFlags sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo tables for the empirical bound");
  sim_cmd->add_option("table", sim.table, "table1 | table2")
      ->required()
      ->check(CLI::IsMember({"table1", "table2"}));
  sim.spec.attach(sim_cmd);
  sim_cmd->add_option("--n", sim.n, "sample sizes")->delimiter(',')->capture_default_str();
  sim_cmd->add_option("--a-levels", sim.a_levels, "table1 levels a")->delimiter(',');
  sim_cmd->add_option("--multipliers", sim.multipliers, "table2 multipliers c")->delimiter(',');

  FitFlags fit;
  auto* fit_cmd = app.add_subcommand("fit", "threshold scan and GPD/Hill fit");
  fit_cmd->add_option("--input", fit.input, "sample file or date,close CSV, '-' for stdin")
      ->required();
  fit_cmd->add_option("--method", fit.method, "clauset | cv-lowest | cv-best | fixed")
      ->capture_default_str()
      ->check(CLI::IsMember({"clauset", "cv-lowest", "cv-best", "fixed"}));
  fit_cmd->add_option("--mu", fit.mu, "threshold for --method fixed")->capture_default_str();
  fit_cmd->add_option("--bootstrap", fit.bootstrap, "bootstrap replicates per CV candidate")
      ->capture_default_str();
  fit_cmd->add_option("--p-threshold", fit.p_threshold, "CV pass level")->capture_default_str();

  AnalyzeFlags an;
  auto* an_cmd = app.add_subcommand("analyze", "returns pipeline on a date,close price file");
  an_cmd->add_option("--prices", an.prices, "date,close CSV, '-' for stdin")->required();
  an_cmd->add_option("--thresholds", an.thresholds, "loss thresholds in percent")->delimiter(',');
  an_cmd->add_option("--models", an.models, "clauset | cv-lowest | cv-best | mu=<value>")
      ->delimiter(',');
  an_cmd->add_option("--emit-plot-data", an.plot_path, "write tail-plot CSV here ('-' inline)");
  an_cmd->add_option("--plot-range", an.plot_range, "nu_min,nu_max")->delimiter(',');
  an_cmd->add_option("--plot-points", an.plot_points, "grid points")->capture_default_str();
  an_cmd->add_option("--loss-table-k", an.loss_k, "rows per loss table")->capture_default_str();
  an_cmd->add_option("--gaussian-threshold", an.gaussian_threshold, "loss for the normal check")
      ->capture_default_str();
  an_cmd->add_option("--bootstrap", an.bootstrap, "bootstrap replicates per CV candidate")
      ->capture_default_str();


  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    std::vector<Table> tables;
    if (*dist_cmd) {
      tables = run_dist(dist, g);
    } else if (*bound_cmd) {
      tables = run_bound(bound, in);
    } else if (*sim_cmd) {
      tables = run_simulate(sim, g);
    } else if (*fit_cmd) {
      tables = run_fit(fit, g, in);
    } else {
      tables = run_analyze(an, g, in);
    }
    write_tables(out, tables, g.output());
    return kExitOk;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace tailbound::cli
