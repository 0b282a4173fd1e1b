#include "powercf/market/profitability.hpp"

#include <exception>

#include "powercf/errors.hpp"
#include "powercf/market/dispatch.hpp"
#include "powercf/market/finance.hpp"

namespace powercf::market {

const HourlyPriceSeries& ScenarioBundle::prices(const std::string& zone) const {
  auto it = zone_prices.find(zone);
  if (it == zone_prices.end()) {
    throw CoverageError("no " + to_string(scenario) + " prices for zone " + zone);
  }
  return it->second;
}

CashFlowLedger unit_profitability(const GenerationUnit& unit, const ScenarioBundle& bundle,
                                  const MarketParams& params) {
  const MonthRange& window = params.window;
  const HourlyPriceSeries& prices = bundle.prices(unit.zone);

  CashFlowLedger ledger;
  ledger.unit_id = unit.unit_id;
  ledger.scenario = bundle.scenario;
  ledger.months.resize(std::size_t(window.size()));
  for (int i = 0; i < window.size(); ++i) {
    LedgerMonth& row = ledger.months[std::size_t(i)];
    row.month = window.first + i;
    if (!unit.in_service_during(row.month)) continue;
    const DispatchResult d = monthly_dispatch(unit, prices.month(row.month));
    row.electricity_revenue = d.electricity_revenue;
    row.variable_cost = d.variable_cost;
    row.online_hours = d.online_hours;
    row.fixed_cost = monthly_fixed_cost(unit, row.month);
  }

  if (has_capacity_market(unit.region)) {
    if (bundle.book == nullptr) {
      throw CoverageError("no capacity auction book for " + to_string(unit.region));
    }
    for (const auto& cp : commitment_calendar(unit.region, window)) {
      CpBid bid;
      bid.cp = cp;
      bid.bid = bid_from_cash_flows(
          cp_cash_flows(unit, cp, prices, window, params.monthly_rate));
      bid.clearing_price =
          bundle.book->price(unit.region, unit.zone, cp.months.first).clearing_usd_per_mw_day;
      bid.cleared = bid.bid <= bid.clearing_price;
      for (const auto& [m, revenue] : capacity_revenue(unit, cp, *bundle.book, bid.bid, window)) {
        ledger.months[std::size_t(m - window.first)].capacity_revenue = revenue;
      }
      ledger.bids.push_back(std::move(bid));
    }
  }

  std::vector<double> net;
  net.reserve(ledger.months.size());
  for (auto& row : ledger.months) {
    row.net = (row.electricity_revenue + row.capacity_revenue) -
              (row.variable_cost + row.fixed_cost);
    net.push_back(row.net);
  }
  ledger.present_value = present_value(net, params.monthly_rate);
  return ledger;
}

std::vector<CashFlowLedger> fleet_profitability(const std::vector<GenerationUnit>& fleet,
                                                const ScenarioBundle& bundle,
                                                const MarketParams& params) {
  std::vector<CashFlowLedger> out(fleet.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < fleet.size(); ++i) {
    try {
      out[i] = unit_profitability(fleet[i], bundle, params);
    } catch (...) {
#pragma omp critical(powercf_fleet_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::vector<CashFlowLedger> fleet_profitability_serial(const std::vector<GenerationUnit>& fleet,
                                                       const ScenarioBundle& bundle,
                                                       const MarketParams& params) {
  std::vector<CashFlowLedger> out;
  out.reserve(fleet.size());
  for (const auto& unit : fleet) out.push_back(unit_profitability(unit, bundle, params));
  return out;
}

namespace {

std::vector<FleetMonth> fleet_stream(const std::vector<CashFlowLedger>& ledgers,
                                     const MonthRange& window) {
  std::vector<FleetMonth> stream(std::size_t(window.size()));
  for (int i = 0; i < window.size(); ++i) stream[std::size_t(i)].month = window.first + i;
  for (const auto& l : ledgers) {
    for (std::size_t i = 0; i < l.months.size(); ++i) {
      const auto& row = l.months[i];
      stream[i].revenue += row.electricity_revenue + row.capacity_revenue;
      stream[i].cost += row.variable_cost + row.fixed_cost;
      stream[i].profit += row.net;
    }
  }
  return stream;
}

}  // namespace

AtRiskReport classify_at_risk(const std::vector<GenerationUnit>& fleet,
                              const std::vector<CashFlowLedger>& counterfactual,
                              const std::vector<CashFlowLedger>& current,
                              const MarketParams& params) {
  if (counterfactual.size() != fleet.size() || current.size() != fleet.size()) {
    throw SchemaError("ledgers do not cover the fleet (" + std::to_string(fleet.size()) +
                      " units, " + std::to_string(counterfactual.size()) + " and " +
                      std::to_string(current.size()) + " ledgers)");
  }
  AtRiskReport r;
  double age_sum = 0.0;
  for (std::size_t i = 0; i < fleet.size(); ++i) {
    const auto& u = fleet[i];
    if (counterfactual[i].unit_id != u.unit_id || current[i].unit_id != u.unit_id) {
      throw SchemaError("ledger order does not match the fleet at unit " + u.unit_id);
    }
    r.fleet_mw += u.capacity_mw;
    r.pv_counterfactual += counterfactual[i].present_value;
    r.pv_current += current[i].present_value;
    if (counterfactual[i].present_value >= 0.0 && current[i].present_value < 0.0) {
      r.at_risk_units.push_back(u.unit_id);
      r.at_risk_mw += u.capacity_mw;
      age_sum += u.age_years_at(params.window.first);
      ++r.per_zone[u.zone];
      ++r.per_region[to_string(u.region)];
    }
  }
  const double n = double(r.at_risk_units.size());
  r.share_of_fleet_mw = r.fleet_mw > 0.0 ? r.at_risk_mw / r.fleet_mw : 0.0;
  r.mean_age_years = n > 0 ? age_sum / n : 0.0;
  r.mean_capacity_mw = n > 0 ? r.at_risk_mw / n : 0.0;
  r.counterfactual_monthly = fleet_stream(counterfactual, params.window);
  r.current_monthly = fleet_stream(current, params.window);
  r.pv_delta = r.pv_counterfactual - r.pv_current;

  for (std::size_t i = 0; i < r.counterfactual_monthly.size(); ++i) {
    const YearMonth m = r.counterfactual_monthly[i].month;
    if (m.year != params.window.first.year) break;
    const double df = discount_factor(int(i) + 1, params.monthly_rate);
    r.pv_delta_first_year +=
        (r.counterfactual_monthly[i].profit - r.current_monthly[i].profit) * df;
  }
  return r;
}

nlohmann::ordered_json AtRiskReport::to_json() const {
  auto stream = [](const std::vector<FleetMonth>& s) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& m : s) {
      a.push_back({{"month", m.month.str()},
                   {"revenue", m.revenue},
                   {"cost", m.cost},
                   {"profit", m.profit}});
    }
    return a;
  };
  return {{"at_risk_units", at_risk_units},
          {"count", at_risk_units.size()},
          {"at_risk_mw", at_risk_mw},
          {"fleet_mw", fleet_mw},
          {"share_of_fleet_mw", share_of_fleet_mw},
          {"mean_age_years", mean_age_years},
          {"mean_capacity_mw", mean_capacity_mw},
          {"per_zone", per_zone},
          {"per_region", per_region},
          {"pv_counterfactual", pv_counterfactual},
          {"pv_current", pv_current},
          {"pv_delta", pv_delta},
          {"pv_delta_first_year", pv_delta_first_year},
          {"counterfactual_monthly", stream(counterfactual_monthly)},
          {"current_monthly", stream(current_monthly)}};
}

}  // namespace powercf::market
