#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "powercf/calendar.hpp"
#include "powercf/market/units.hpp"

namespace powercf::market {

/// Hourly $/MWh prices for one zone, grouped by month. Each month holds
/// exactly days * 24 hours in chronological order.
struct ZonePrices {
  std::string zone;
  std::map<YearMonth, std::vector<double>> months;

  /// Throws CoverageError when the month is missing.
  const std::vector<double>& month(YearMonth m) const;
  bool has(YearMonth m) const { return months.count(m) != 0; }
  double monthly_mean(YearMonth m) const;
};

/// Reconstructed (or actual) hourly prices over the analysis window.
struct HourlyPriceSeries : ZonePrices {
  Scenario scenario = Scenario::kCounterfactual;
};

/// hourly-prices CSV: timestamp (ISO-8601, hourly), price_usd_per_mwh.
ZonePrices load_hourly_prices(const std::filesystem::path& path, std::string zone);
ZonePrices parse_hourly_prices(std::string_view csv_text, std::string zone);

/// Monthly regional forecasts keyed by publication vintage ("2020-01", "2021-01").
class MonthlyForecasts {
 public:
  /// monthly-forecast CSV: region, year, month, price_usd_per_mwh, vintage.
  static MonthlyForecasts load(const std::filesystem::path& path);
  static MonthlyForecasts parse(std::string_view csv_text);

  void set(Region region, const std::string& vintage, YearMonth month, double price);
  /// Throws CoverageError when absent.
  double get(Region region, const std::string& vintage, YearMonth month) const;
  bool has(Region region, const std::string& vintage, YearMonth month) const;

 private:
  std::map<std::tuple<Region, std::string, YearMonth>, double> prices_;
};

/// Which forecast vintage drives a scenario and which months use actual prices.
struct ScenarioDefinition {
  Scenario scenario = Scenario::kCounterfactual;
  std::string vintage = "2020-01";
  std::optional<MonthRange> actual_months;

  static ScenarioDefinition counterfactual();        // 2020-01 vintage throughout
  static ScenarioDefinition current_expectations();  // actuals Mar-Dec 2020, then 2021-01
};

struct TemplateChoice {
  YearMonth target;
  int template_year = 0;
  double template_mean = 0.0;
  double shift = 0.0;
};

/// Hourly profile for `target` whose mean equals `forecast`: pick the template
/// year whose same-calendar-month average is closest to the forecast (ties go
/// to the more recent year), copy its hours, and shift them by a constant.
/// A template month longer than the target is truncated; a shorter one is
/// extended by repeating its final day.
std::vector<double> reconstruct_month(const ZonePrices& history, YearMonth target, double forecast,
                                      const std::vector<int>& template_years = {2018, 2019, 2020},
                                      TemplateChoice* choice = nullptr);

/// Hourly scenario for one zone over `window`.
HourlyPriceSeries build_hourly_scenario(const MonthlyForecasts& forecasts,
                                        const ZonePrices& history, Region region,
                                        const ScenarioDefinition& scenario,
                                        const MonthRange& window = kAnalysisWindow,
                                        const std::vector<int>& template_years = {2018, 2019, 2020},
                                        std::vector<TemplateChoice>* choices = nullptr);

}  // namespace powercf::market
