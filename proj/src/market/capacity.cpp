#include "powercf/market/capacity.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "powercf/csv.hpp"
#include "powercf/errors.hpp"
#include "powercf/market/dispatch.hpp"
#include "powercf/market/finance.hpp"

namespace powercf::market {
namespace {

MonthRange intersect(const MonthRange& a, const MonthRange& b) {
  return {std::max(a.first, b.first), std::min(a.last, b.last)};
}

std::string season_of(Region region, YearMonth first) {
  if (region != Region::kNyiso) return "annual";
  return first.month == 5 ? "summer" : "winter";
}

bool on_calendar(Region region, const MonthRange& months) {
  if (region == Region::kNyiso) {
    return (months.first.month == 5 || months.first.month == 11) && months.size() == 6;
  }
  return months.first.month == 6 && months.size() == 12;
}

CapacityAuctionBook book_from(const CsvTable& table) {
  table.require({"region", "zone", "cp_start", "cp_end", "clearing_usd_per_mw_day"});
  CapacityAuctionBook book;
  for (const auto& row : table.rows()) {
    const std::string where = table.source() + ":" + std::to_string(row.line);
    try {
      CapacityPrice p;
      p.region = region_from_string(table.text(row, "region"));
      p.zone = table.text(row, "zone");
      const Date start = parse_date(table.text(row, "cp_start"));
      const Date end = parse_date(table.text(row, "cp_end"));
      if (unsigned(start.day()) != 1) throw SchemaError("cp_start must be the first of a month");
      const YearMonth last = year_month_of(end);
      if (int(unsigned(end.day())) != last.days()) {
        throw SchemaError("cp_end must be the last day of a month");
      }
      p.cp.months = {year_month_of(start), last};
      p.cp.season = season_of(p.region, p.cp.months.first);
      p.clearing_usd_per_mw_day = table.number(row, "clearing_usd_per_mw_day");
      if (table.has("provenance") && !table.text(row, "provenance").empty()) {
        p.provenance = table.text(row, "provenance");
      }
      book.add(std::move(p));
    } catch (const CoverageError&) {
      throw;
    } catch (const SchemaError& e) {
      throw SchemaError(where + ": " + e.what());
    }
  }
  return book;
}

}  // namespace

Date CommitmentPeriod::start() const {
  return Date{std::chrono::year{months.first.year}, std::chrono::month{unsigned(months.first.month)},
              std::chrono::day{1}};
}

Date CommitmentPeriod::end() const {
  return Date{std::chrono::year{months.last.year}, std::chrono::month{unsigned(months.last.month)},
              std::chrono::day{unsigned(months.last.days())}};
}

std::string CommitmentPeriod::label() const {
  return months.first.str() + ".." + months.last.str();
}

std::vector<CommitmentPeriod> commitment_calendar(Region region, const MonthRange& window) {
  std::vector<CommitmentPeriod> out;
  if (!has_capacity_market(region)) return out;
  for (int year = window.first.year - 1; year <= window.last.year; ++year) {
    std::vector<CommitmentPeriod> candidates;
    if (region == Region::kNyiso) {
      candidates.push_back({{{year, 5}, {year, 10}}, "summer"});
      candidates.push_back({{{year, 11}, {year + 1, 4}}, "winter"});
    } else {
      candidates.push_back({{{year, 6}, {year + 1, 5}}, "annual"});
    }
    for (auto& cp : candidates) {
      if (cp.months.last >= window.first && cp.months.first <= window.last) {
        out.push_back(std::move(cp));
      }
    }
  }
  return out;
}

int extrapolation_lookback(Region region) {
  switch (region) {
    case Region::kPjm: return 5;
    case Region::kMiso: return 4;
    case Region::kNyiso: return 3;
    default: return 0;
  }
}

CapacityAuctionBook CapacityAuctionBook::load(const std::filesystem::path& path) {
  return book_from(CsvTable::read(path));
}

CapacityAuctionBook CapacityAuctionBook::parse(std::string_view csv_text) {
  return book_from(CsvTable::parse(csv_text, "<capacity-prices>"));
}

void CapacityAuctionBook::add(CapacityPrice price) {
  if (!has_capacity_market(price.region)) {
    throw SchemaError(to_string(price.region) + " has no capacity market");
  }
  if (!on_calendar(price.region, price.cp.months)) {
    throw SchemaError("commitment period " + price.cp.label() + " is not on the " +
                      to_string(price.region) + " auction calendar");
  }
  price.cp.season = season_of(price.region, price.cp.months.first);
  for (const auto& e : entries_) {
    if (e.region == price.region && e.zone == price.zone &&
        e.cp.months.first <= price.cp.months.last && price.cp.months.first <= e.cp.months.last) {
      throw SchemaError("commitment period " + price.cp.label() + " overlaps " + e.cp.label() +
                        " for zone " + price.zone);
    }
  }
  entries_.push_back(std::move(price));
}

void CapacityAuctionBook::extrapolate(const MonthRange& window) {
  std::set<std::pair<Region, std::string>> zones;
  for (const auto& e : entries_) zones.emplace(e.region, e.zone);

  for (const auto& [region, zone] : zones) {
    for (const auto& cp : commitment_calendar(region, window)) {
      if (find(region, zone, cp.months.first) != nullptr) continue;
      const int lookback = extrapolation_lookback(region);
      std::vector<const CapacityPrice*> prior;
      for (const auto& e : entries_) {
        if (e.region == region && e.zone == zone && e.cp.season == cp.season &&
            e.provenance == "actual" && e.cp.months.last < cp.months.first) {
          prior.push_back(&e);
        }
      }
      if (lookback == 0 || int(prior.size()) < lookback) {
        throw CoverageError("no clearing price for " + to_string(region) + " zone " + zone + " " +
                            cp.label() + " and " + std::to_string(prior.size()) +
                            " prior actual periods to extrapolate from (need " +
                            std::to_string(lookback) + ")");
      }
      std::sort(prior.begin(), prior.end(), [](const CapacityPrice* a, const CapacityPrice* b) {
        return a->cp.months.first < b->cp.months.first;
      });
      double sum = 0.0;
      for (auto it = prior.end() - lookback; it != prior.end(); ++it) {
        sum += (*it)->clearing_usd_per_mw_day;
      }
      CapacityPrice p;
      p.region = region;
      p.zone = zone;
      p.cp = cp;
      p.clearing_usd_per_mw_day = sum / double(lookback);
      p.provenance = "extrapolated-average";
      entries_.push_back(std::move(p));
    }
  }
}

const CapacityPrice* CapacityAuctionBook::find(Region region, const std::string& zone,
                                               YearMonth m) const {
  for (const auto& e : entries_) {
    if (e.region == region && e.zone == zone && e.cp.months.contains(m)) return &e;
  }
  return nullptr;
}

const CapacityPrice& CapacityAuctionBook::price(Region region, const std::string& zone,
                                                YearMonth m) const {
  const CapacityPrice* p = find(region, zone, m);
  if (p == nullptr) {
    throw CoverageError("no capacity clearing price for " + to_string(region) + " zone " + zone +
                        " in " + m.str());
  }
  return *p;
}

CpCashFlows cp_cash_flows(const GenerationUnit& unit, const CommitmentPeriod& cp,
                          const ZonePrices& scenario_prices, const MonthRange& window,
                          double monthly_rate) {
  const MonthRange span = intersect(cp.months, window);
  if (span.size() <= 0) {
    throw CoverageError("commitment period " + cp.label() + " lies outside the price window " +
                        window.first.str() + ".." + window.last.str());
  }
  CpCashFlows flows;
  for (YearMonth m = span.first; m <= span.last; ++m) {
    if (!unit.in_service_during(m)) continue;
    const double df = discount_factor(month_index(m, window), monthly_rate);
    const DispatchResult d = monthly_dispatch(unit, scenario_prices.month(m));
    flows.pv_energy_revenue += d.electricity_revenue * df;
    flows.pv_variable_cost += d.variable_cost * df;
    flows.pv_fixed_cost += monthly_fixed_cost(unit, m) * df;
    flows.pv_mw_days += unit.capacity_mw * double(m.days()) * df;
  }
  return flows;
}

double bid_from_cash_flows(const CpCashFlows& flows) {
  const double shortfall = flows.pv_variable_cost + flows.pv_fixed_cost - flows.pv_energy_revenue;
  if (shortfall <= 0.0 || flows.pv_mw_days <= 0.0) return 0.0;
  return shortfall / flows.pv_mw_days;
}

double capacity_bid(const GenerationUnit& unit, const CommitmentPeriod& cp,
                    const ZonePrices& scenario_prices, const MonthRange& window,
                    double monthly_rate) {
  if (!has_capacity_market(unit.region)) {
    throw DomainError("unit " + unit.unit_id + " is in " + to_string(unit.region) +
                      ", which has no capacity market");
  }
  return bid_from_cash_flows(cp_cash_flows(unit, cp, scenario_prices, window, monthly_rate));
}

std::vector<std::pair<YearMonth, double>> capacity_revenue(const GenerationUnit& unit,
                                                           const CommitmentPeriod& cp,
                                                           const CapacityAuctionBook& book,
                                                           double bid, const MonthRange& window) {
  const double g = book.price(unit.region, unit.zone, cp.months.first).clearing_usd_per_mw_day;
  const bool cleared = bid <= g;
  std::vector<std::pair<YearMonth, double>> out;
  const MonthRange span = intersect(cp.months, window);
  for (YearMonth m = span.first; m <= span.last; ++m) {
    const double revenue =
        cleared && unit.in_service_during(m) ? g * unit.capacity_mw * double(m.days()) : 0.0;
    out.emplace_back(m, revenue);
  }
  return out;
}

}  // namespace powercf::market
