#include "tailbound/returns.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "tailbound/error.hpp"
#include "tailbound/normal.hpp"
#include "tailbound/stats.hpp"

namespace tailbound {

namespace {

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

double period_key(const Date& d, Granularity g) {
  const int y = static_cast<int>(d.year());
  const unsigned m = static_cast<unsigned>(d.month());
  switch (g) {
    case Granularity::Daily: return std::chrono::sys_days{d}.time_since_epoch().count();
    case Granularity::Monthly: return y * 12.0 + m;
    case Granularity::Yearly: return y;
  }
  return 0.0;
}

bool loss_before(const LossRow& a, const LossRow& b) {
  if (a.loss != b.loss) return a.loss > b.loss;
  return std::chrono::sys_days{a.date} < std::chrono::sys_days{b.date};
}

double return_period_or_inf(double prob, double days) {
  return prob > 0.0 ? return_period(prob, days) : std::numeric_limits<double>::infinity();
}

}  // namespace

Date parse_date(std::string_view text) {
  text = trim(text);
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
      !parse_number(text.substr(0, 4), y) || !parse_number(text.substr(5, 2), m) ||
      !parse_number(text.substr(8, 2), d)) {
    throw DataError("invalid date '" + std::string(text) + "' (expected YYYY-MM-DD)");
  }
  const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) throw DataError("invalid calendar date '" + std::string(text) + "'");
  return date;
}

std::string format_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

PriceSeries::PriceSeries(std::vector<PricePoint> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw DataError("price series needs at least 2 closes");
  for (const auto& p : points_) {
    if (!std::isfinite(p.close) || !(p.close > 0.0)) {
      throw DataError("non-positive close on " + format_date(p.date));
    }
  }
  std::stable_sort(points_.begin(), points_.end(), [](const PricePoint& a, const PricePoint& b) {
    return std::chrono::sys_days{a.date} < std::chrono::sys_days{b.date};
  });
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i].date == points_[i - 1].date) {
      throw DataError("duplicate date " + format_date(points_[i].date));
    }
  }
}

PriceSeries load_prices(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<PricePoint> points;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = trim(line);
    if (row.empty()) continue;
    if (!have_header) {
      if (line_no == 1 && row.size() >= 3 && row.substr(0, 3) == "\xEF\xBB\xBF") {
        line.erase(0, 3);
      }
      std::string header;
      for (char c : lower(trim(line))) {
        if (c != ' ' && c != '"') header.push_back(c);
      }
      if (header != "date,close") {
        throw DataError("line " + std::to_string(line_no) + ": expected header 'date,close'");
      }
      have_header = true;
      continue;
    }
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      throw DataError("line " + std::to_string(line_no) + ": expected 2 fields 'date,close'");
    }
    PricePoint p;
    try {
      p.date = parse_date(row.substr(0, comma));
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
    const auto close_text = trim(row.substr(comma + 1));
    if (!parse_number(close_text, p.close) || !std::isfinite(p.close)) {
      throw DataError("line " + std::to_string(line_no) + ": invalid close '" +
                      std::string(close_text) + "'");
    }
    if (!(p.close > 0.0)) {
      throw DataError("line " + std::to_string(line_no) + ": non-positive close");
    }
    points.push_back(p);
  }
  if (!have_header) throw DataError("empty input: expected header 'date,close'");
  return PriceSeries(std::move(points));
}

ReturnsSeries log_returns(const PriceSeries& prices) {
  const auto& p = prices.points();
  ReturnsSeries r;
  r.entries.reserve(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) {
    const double v = 100.0 * std::log(p[i].close / p[i - 1].close);
    r.entries.push_back({p[i].date, v});
    if (v > 0.0) {
      ++r.positive;
    } else if (v < 0.0) {
      ++r.negative;
    } else {
      ++r.zero;
    }
  }
  return r;
}

SortedSample negative_losses(const ReturnsSeries& returns) {
  std::vector<double> losses;
  losses.reserve(returns.negative);
  for (const auto& e : returns.entries) {
    if (e.value < 0.0) losses.push_back(-e.value);
  }
  if (losses.empty()) throw DataError("no negative returns in the series");
  return SortedSample(std::move(losses));
}

TailBoundReport unconditional_bound(const ReturnsSeries& returns, double nu) {
  const auto losses = negative_losses(returns);
  TailBoundReport r = empirical_bound(losses, nu);
  r.n = returns.size();
  r.bound = losses.maximum() / (static_cast<double>(returns.size()) * nu);
  return r;
}

double unconditional_bound_factored(const ReturnsSeries& returns, double nu) {
  const auto losses = negative_losses(returns);
  const double fraction = static_cast<double>(losses.size()) / static_cast<double>(returns.size());
  return empirical_bound(losses, nu).bound * fraction;
}

std::string_view to_string(Granularity g) {
  switch (g) {
    case Granularity::Daily: return "daily";
    case Granularity::Monthly: return "monthly";
    case Granularity::Yearly: return "yearly";
  }
  return "unknown";
}

LossTable largest_losses(const ReturnsSeries& returns, Granularity granularity, std::size_t k) {
  LossTable table;
  table.granularity = granularity;
  std::vector<LossRow> rows;
  if (granularity == Granularity::Daily) {
    for (const auto& e : returns.entries) {
      if (e.value < 0.0) rows.push_back({0, e.date, -e.value});
    }
  } else {
    struct Period {
      Date last;
      double worst = 0.0;
      bool any_loss = false;
    };
    std::map<double, Period> periods;
    for (const auto& e : returns.entries) {
      auto& p = periods[period_key(e.date, granularity)];
      p.last = e.date;
      if (e.value < 0.0 && (!p.any_loss || -e.value > p.worst)) {
        p.worst = -e.value;
        p.any_loss = true;
      }
    }
    for (const auto& [key, p] : periods) {
      if (p.any_loss) rows.push_back({0, p.last, p.worst});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), loss_before);
  if (rows.size() > k) rows.resize(k);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = i + 1;
  table.rows = std::move(rows);
  return table;
}

GaussianRefutation gaussian_refutation(const ReturnsSeries& returns, double loss_threshold,
                                       double trading_days_per_year) {
  if (returns.size() < 2) throw DataError("gaussian_refutation: need at least 2 returns");
  std::vector<double> values;
  values.reserve(returns.size());
  for (const auto& e : returns.entries) values.push_back(e.value);
  GaussianRefutation g;
  g.threshold = loss_threshold;
  g.mu_hat = sample_mean(values);
  g.sigma_hat = sample_sd(values);
  if (!(g.sigma_hat > 0.0)) throw DataError("gaussian_refutation: returns have zero variance");
  g.prob = normal::cdf((-loss_threshold - g.mu_hat) / g.sigma_hat);
  g.return_period_years = return_period_or_inf(g.prob, trading_days_per_year);
  return g;
}

ModelRequest ModelRequest::parse(std::string_view text) {
  const auto t = lower(trim(text));
  ModelRequest r;
  if (t == "clauset") {
    r.kind = Kind::Clauset;
  } else if (t == "cv-lowest") {
    r.kind = Kind::CvLowest;
  } else if (t == "cv-best") {
    r.kind = Kind::CvBest;
  } else if (t.rfind("mu=", 0) == 0 && parse_number(std::string_view(t).substr(3), r.mu) &&
             std::isfinite(r.mu) && r.mu >= 0.0) {
    r.kind = Kind::FixedThreshold;
  } else {
    throw InvalidParameter("unknown model '" + std::string(text) +
                           "' (expected clauset, cv-lowest, cv-best or mu=<value>)");
  }
  return r;
}

std::string ModelRequest::describe() const {
  switch (kind) {
    case Kind::FixedThreshold: {
      char buf[48];
      std::snprintf(buf, sizeof buf, "mu=%g", mu);
      return buf;
    }
    case Kind::Clauset: return "clauset";
    case Kind::CvLowest: return "cv-lowest";
    case Kind::CvBest: return "cv-best";
  }
  return "unknown";
}

std::vector<ModelRequest> default_model_requests() {
  return {ModelRequest::parse("cv-lowest"), ModelRequest::parse("cv-best"),
          ModelRequest::parse("clauset")};
}

std::vector<double> default_analysis_thresholds() { return {5.0, 10.0, 13.84, 15.0, 20.0}; }

std::vector<LpdModel> fit_models(const ReturnsSeries& returns,
                                 const std::vector<ModelRequest>& requests,
                                 const CvOptions& cv) {
  const auto losses = negative_losses(returns);
  const double n_total = static_cast<double>(returns.size());
  std::vector<LpdModel> models;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const auto& req = requests[i];
    double mu = req.mu;
    switch (req.kind) {
      case ModelRequest::Kind::FixedThreshold: break;
      case ModelRequest::Kind::Clauset: mu = select_threshold_clauset(losses).chosen().mu; break;
      case ModelRequest::Kind::CvLowest:
      case ModelRequest::Kind::CvBest: {
        CvOptions opt = cv;
        opt.policy = req.kind == ModelRequest::Kind::CvLowest ? ScanMethod::CvLowest
                                                              : ScanMethod::CvBest;
        mu = select_threshold_cv(losses, opt).chosen().mu;
        break;
      }
    }
    LpdModel m;
    m.name = "LPD-" + std::to_string(i + 1);
    m.request = req;
    m.fit = fit_lpd(losses, mu);
    m.exceed_fraction = static_cast<double>(m.fit.n_exceed) / n_total;
    models.push_back(std::move(m));
  }
  return models;
}

AnalysisReport full_analysis(const ReturnsSeries& returns, const AnalysisOptions& options) {
  for (double nu : options.thresholds) {
    if (!(nu > 0.0)) throw InvalidParameter("analysis thresholds must be > 0");
  }
  const auto losses = negative_losses(returns);
  const double n_total = static_cast<double>(returns.size());
  const double days = options.trading_days_per_year;

  AnalysisReport rep;
  rep.n_total = returns.size();
  rep.positive = returns.positive;
  rep.negative = returns.negative;
  rep.zero = returns.zero;
  rep.max_loss = losses.maximum();
  rep.second_loss = losses.second_largest();
  for (auto g : {Granularity::Daily, Granularity::Monthly, Granularity::Yearly}) {
    rep.loss_tables.push_back(largest_losses(returns, g, options.loss_table_k));
  }
  rep.gaussian = gaussian_refutation(returns, options.gaussian_threshold, days);
  rep.models = fit_models(returns, options.models, options.cv);

  auto add_row = [&](const std::string& model, double nu, double prob) {
    rep.rows.push_back({model, nu, prob, prob * n_total, return_period_or_inf(prob, days)});
  };
  for (double nu : options.thresholds) {
    add_row("eB", nu, unconditional_bound(returns, nu).bound);
  }
  for (double nu : options.thresholds) {
    add_row("empirical", nu, static_cast<double>(count_exceedances(losses, nu)) / n_total);
  }
  for (const auto& m : rep.models) {
    for (double nu : options.thresholds) {
      add_row(m.name, nu, nu >= m.fit.mu ? lpd_tail_prob(m.fit, nu, m.exceed_fraction)
                                         : std::numeric_limits<double>::quiet_NaN());
    }
  }

  // q1 is judged on the loss sample, so the tail is conditional on a loss.
  for (const auto& m : rep.models) {
    const FittedTail law{m.fit, static_cast<double>(m.fit.n_exceed) /
                                    static_cast<double>(losses.size())};
    rep.q1_checks.push_back({m.name, q1_equivalence_check(losses, law), losses.maximum()});
  }
  return rep;
}

PlotData emit_tail_plot_data(const ReturnsSeries& returns, const std::vector<LpdModel>& models,
                             double nu_min, double nu_max, std::size_t points) {
  if (!(nu_min > 0.0) || !(nu_max > nu_min)) {
    throw InvalidParameter("plot range must satisfy 0 < nu_min < nu_max");
  }
  if (points < 2) throw InvalidParameter("plot needs at least 2 grid points");
  const auto losses = negative_losses(returns);
  const double n_total = static_cast<double>(returns.size());
  PlotData data;
  for (const auto& m : models) data.model_names.push_back(m.name);
  for (std::size_t i = 0; i < points; ++i) {
    PlotRow row;
    row.nu = nu_min + (nu_max - nu_min) * static_cast<double>(i) / static_cast<double>(points - 1);
    row.empirical = static_cast<double>(count_exceedances(losses, row.nu)) / n_total;
    for (const auto& m : models) row.lpd.push_back(m.exceed_fraction * m.fit.tail(row.nu));
    if (row.nu >= losses.second_largest()) row.eb = losses.maximum() / (n_total * row.nu);
    data.rows.push_back(std::move(row));
  }
  return data;
}

}  // namespace tailbound
