#pragma once

#include <chrono>
#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tailbound/bounds.hpp"
#include "tailbound/evtfit.hpp"

namespace tailbound {

using Date = std::chrono::year_month_day;

/// Strict YYYY-MM-DD. Throws DataError.
Date parse_date(std::string_view text);
std::string format_date(const Date& date);

struct PricePoint {
  Date date;
  double close = 0.0;
};

/// Daily closes with unique ascending dates and positive prices.
class PriceSeries {
 public:
  /// Sorts by date; throws DataError on fewer than 2 points, a non-positive
  /// close or a repeated date.
  explicit PriceSeries(std::vector<PricePoint> points);

  const std::vector<PricePoint>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }

 private:
  std::vector<PricePoint> points_;
};

/// CSV with header `date,close` (LF or CRLF). Errors carry the line number.
PriceSeries load_prices(std::istream& in);

struct DatedReturn {
  Date date;
  double value = 0.0;  // percent
};

struct ReturnsSeries {
  std::vector<DatedReturn> entries;
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;

  std::size_t size() const noexcept { return entries.size(); }
};

/// R_t = 100 ln(S_t / S_{t-1}).
ReturnsSeries log_returns(const PriceSeries& prices);

/// {-R : R < 0}, ascending. Throws DataError when there are no losses.
SortedSample negative_losses(const ReturnsSeries& returns);

/// Unconditional eB for losses: x_max / (n_total nu). `n` in the report is n_total.
TailBoundReport unconditional_bound(const ReturnsSeries& returns, double nu);

/// The same bound written as the conditional eB on losses times the
/// fraction of negative returns.
double unconditional_bound_factored(const ReturnsSeries& returns, double nu);

enum class Granularity { Daily, Monthly, Yearly };
std::string_view to_string(Granularity g);

struct LossRow {
  std::size_t rank = 0;
  Date date;
  double loss = 0.0;
};

struct LossTable {
  Granularity granularity = Granularity::Daily;
  std::vector<LossRow> rows;
};

/// Top-k losses. Monthly and yearly rows hold each period's largest daily
/// loss, dated by the period's last date in the series. Ties go to the
/// earlier date.
LossTable largest_losses(const ReturnsSeries& returns, Granularity granularity, std::size_t k);

struct GaussianRefutation {
  double threshold = 0.0;
  double mu_hat = 0.0;
  double sigma_hat = 0.0;
  double prob = 0.0;  // Pr{R < -threshold} under N(mu_hat, sigma_hat^2)
  double return_period_years = 0.0;
};

GaussianRefutation gaussian_refutation(const ReturnsSeries& returns, double loss_threshold,
                                       double trading_days_per_year = 250.0);

/// How one LPD model picks its threshold.
struct ModelRequest {
  enum class Kind { FixedThreshold, Clauset, CvLowest, CvBest };
  Kind kind = Kind::CvLowest;
  double mu = 0.0;  // FixedThreshold only

  /// "clauset", "cv-lowest", "cv-best" or "mu=<value>".
  static ModelRequest parse(std::string_view text);
  std::string describe() const;
};

std::vector<ModelRequest> default_model_requests();
std::vector<double> default_analysis_thresholds();

struct LpdModel {
  std::string name;  // LPD-1, LPD-2, ...
  ModelRequest request;
  GpdFit fit;
  double exceed_fraction = 0.0;  // n_exceed / n_total
};

struct ProbabilityRow {
  std::string model;  // "eB", "empirical" or an LPD name
  double nu = 0.0;
  double probability = 0.0;
  double expected_count = 0.0;       // probability * n_total
  double return_period_years = 0.0;  // +inf when probability is 0
};

struct Q1Row {
  std::string model;
  Q1Equivalence check;
  double sample_max = 0.0;
};

struct AnalysisOptions {
  std::vector<double> thresholds = default_analysis_thresholds();
  std::vector<ModelRequest> models = default_model_requests();
  CvOptions cv;
  double trading_days_per_year = 250.0;
  double gaussian_threshold = 10.0;
  std::size_t loss_table_k = 8;
};

struct AnalysisReport {
  std::size_t n_total = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
  double max_loss = 0.0;
  double second_loss = 0.0;
  std::vector<LossTable> loss_tables;  // daily, monthly, yearly
  GaussianRefutation gaussian;
  std::vector<LpdModel> models;
  std::vector<ProbabilityRow> rows;
  std::vector<Q1Row> q1_checks;
};

std::vector<LpdModel> fit_models(const ReturnsSeries& returns,
                                 const std::vector<ModelRequest>& requests,
                                 const CvOptions& cv = {});

AnalysisReport full_analysis(const ReturnsSeries& returns, const AnalysisOptions& options = {});

struct PlotRow {
  double nu = 0.0;
  double empirical = 0.0;
  std::vector<double> lpd;
  std::optional<double> eb;  // from x_{n-1,n} upward
};

struct PlotData {
  std::vector<std::string> model_names;
  std::vector<PlotRow> rows;
};

/// Unconditional tails on an even grid of `points` values over [nu_min, nu_max].
PlotData emit_tail_plot_data(const ReturnsSeries& returns, const std::vector<LpdModel>& models,
                             double nu_min = 4.5, double nu_max = 20.0,
                             std::size_t points = 311);

}  // namespace tailbound
