#include "powercf/market/prices.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "powercf/csv.hpp"
#include "powercf/errors.hpp"

namespace powercf::market {
namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

struct Stamp {
  YearMonth month;
  int day = 0;
  int hour = 0;
};

// "YYYY-MM-DDTHH..." or "YYYY-MM-DD HH..."; minutes and offsets ignored.
Stamp parse_stamp(const std::string& text, const std::string& where) {
  if (text.size() < 13 || (text[10] != 'T' && text[10] != ' ')) {
    throw SchemaError(where + ": cannot parse timestamp '" + text + "'");
  }
  const Date d = parse_date(std::string_view(text).substr(0, 10));
  const std::string hh = text.substr(11, 2);
  if (!std::isdigit(static_cast<unsigned char>(hh[0])) ||
      !std::isdigit(static_cast<unsigned char>(hh[1]))) {
    throw SchemaError(where + ": cannot parse hour in '" + text + "'");
  }
  const int hour = std::stoi(hh);
  if (hour > 23) throw SchemaError(where + ": hour out of range in '" + text + "'");
  return {year_month_of(d), int(unsigned(d.day())), hour};
}

ZonePrices prices_from(const CsvTable& table, std::string zone) {
  table.require({"timestamp", "price_usd_per_mwh"});
  ZonePrices out;
  out.zone = std::move(zone);
  std::map<YearMonth, std::vector<std::pair<int, double>>> staged;
  for (const auto& row : table.rows()) {
    const std::string where = table.source() + ":" + std::to_string(row.line);
    const Stamp s = parse_stamp(table.text(row, "timestamp"), where);
    staged[s.month].emplace_back((s.day - 1) * 24 + s.hour, table.number(row, "price_usd_per_mwh"));
  }
  for (auto& [month, hours] : staged) {
    const int expected = month.days() * 24;
    std::vector<double> values(std::size_t(expected), std::numeric_limits<double>::quiet_NaN());
    for (const auto& [slot, price] : hours) {
      if (!std::isnan(values[std::size_t(slot)])) {
        throw SchemaError(table.source() + ": duplicate hour in " + month.str());
      }
      values[std::size_t(slot)] = price;
    }
    if (int(hours.size()) != expected) {
      throw CoverageError(table.source() + ": " + month.str() + " has " +
                          std::to_string(hours.size()) + " hourly prices, expected " +
                          std::to_string(expected));
    }
    out.months.emplace(month, std::move(values));
  }
  return out;
}

}  // namespace

const std::vector<double>& ZonePrices::month(YearMonth m) const {
  auto it = months.find(m);
  if (it == months.end()) {
    throw CoverageError("zone " + zone + " has no hourly prices for " + m.str());
  }
  return it->second;
}

double ZonePrices::monthly_mean(YearMonth m) const { return mean_of(month(m)); }

ZonePrices load_hourly_prices(const std::filesystem::path& path, std::string zone) {
  return prices_from(CsvTable::read(path), std::move(zone));
}

ZonePrices parse_hourly_prices(std::string_view csv_text, std::string zone) {
  return prices_from(CsvTable::parse(csv_text, "<hourly:" + zone + ">"), zone);
}

namespace {

MonthlyForecasts forecasts_from(const CsvTable& table) {
  table.require({"region", "year", "month", "price_usd_per_mwh", "vintage"});
  MonthlyForecasts out;
  for (const auto& row : table.rows()) {
    const std::string where = table.source() + ":" + std::to_string(row.line);
    Region region;
    std::string vintage;
    try {
      region = region_from_string(table.text(row, "region"));
      vintage = YearMonth::parse(table.text(row, "vintage")).str();
    } catch (const SchemaError& e) {
      throw SchemaError(where + ": " + e.what());
    }
    const int month = table.integer(row, "month");
    if (month < 1 || month > 12) throw SchemaError(where + ": month out of range");
    const YearMonth ym{table.integer(row, "year"), month};
    if (out.has(region, vintage, ym)) {
      throw SchemaError(where + ": duplicate forecast for " + to_string(region) + " " + ym.str() +
                        " vintage " + vintage);
    }
    out.set(region, vintage, ym, table.number(row, "price_usd_per_mwh"));
  }
  return out;
}

}  // namespace

MonthlyForecasts MonthlyForecasts::load(const std::filesystem::path& path) {
  return forecasts_from(CsvTable::read(path));
}

MonthlyForecasts MonthlyForecasts::parse(std::string_view csv_text) {
  return forecasts_from(CsvTable::parse(csv_text, "<monthly-forecasts>"));
}

void MonthlyForecasts::set(Region region, const std::string& vintage, YearMonth month,
                           double price) {
  prices_[{region, vintage, month}] = price;
}

bool MonthlyForecasts::has(Region region, const std::string& vintage, YearMonth month) const {
  return prices_.count({region, vintage, month}) != 0;
}

double MonthlyForecasts::get(Region region, const std::string& vintage, YearMonth month) const {
  auto it = prices_.find({region, vintage, month});
  if (it == prices_.end()) {
    throw CoverageError("no " + vintage + " forecast for " + to_string(region) + " " +
                        month.str());
  }
  return it->second;
}

ScenarioDefinition ScenarioDefinition::counterfactual() {
  return {Scenario::kCounterfactual, "2020-01", std::nullopt};
}

ScenarioDefinition ScenarioDefinition::current_expectations() {
  return {Scenario::kCurrentExpectations, "2021-01", MonthRange{{2020, 3}, {2020, 12}}};
}

std::vector<double> reconstruct_month(const ZonePrices& history, YearMonth target, double forecast,
                                      const std::vector<int>& template_years,
                                      TemplateChoice* choice) {
  if (template_years.empty()) throw SchemaError("no template years configured");
  TemplateChoice best;
  best.target = target;
  double best_gap = std::numeric_limits<double>::infinity();
  for (int year : template_years) {
    const YearMonth candidate{year, target.month};
    const double avg = history.monthly_mean(candidate);  // CoverageError if missing
    const double gap = std::abs(avg - forecast);
    if (gap < best_gap || (gap == best_gap && year > best.template_year)) {
      best_gap = gap;
      best.template_year = year;
      best.template_mean = avg;
    }
  }

  const auto& source = history.month({best.template_year, target.month});
  const std::size_t want = std::size_t(target.days()) * 24;
  std::vector<double> hours(source.begin(), source.begin() + std::ptrdiff_t(std::min(want, source.size())));
  while (hours.size() < want) {
    const std::size_t last_day = source.size() - 24;
    hours.push_back(source[last_day + (hours.size() - source.size()) % 24]);
  }

  // Shift by the constant that moves the (possibly resized) month onto the forecast.
  best.shift = forecast - mean_of(hours);
  for (double& p : hours) p += best.shift;
  if (choice != nullptr) *choice = best;
  return hours;
}

HourlyPriceSeries build_hourly_scenario(const MonthlyForecasts& forecasts,
                                        const ZonePrices& history, Region region,
                                        const ScenarioDefinition& scenario,
                                        const MonthRange& window,
                                        const std::vector<int>& template_years,
                                        std::vector<TemplateChoice>* choices) {
  HourlyPriceSeries out;
  out.zone = history.zone;
  out.scenario = scenario.scenario;
  for (YearMonth m = window.first; m <= window.last; ++m) {
    if (scenario.actual_months && scenario.actual_months->contains(m)) {
      out.months.emplace(m, history.month(m));
      continue;
    }
    TemplateChoice choice;
    const double forecast = forecasts.get(region, scenario.vintage, m);
    out.months.emplace(m, reconstruct_month(history, m, forecast, template_years, &choice));
    if (choices != nullptr) choices->push_back(choice);
  }
  return out;
}

}  // namespace powercf::market
