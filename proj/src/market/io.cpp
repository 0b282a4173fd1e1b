#include "powercf/market/io.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "powercf/errors.hpp"
#include "powercf/format.hpp"
#include "powercf/market/finance.hpp"

namespace powercf::market {

MarketInputs load_market_inputs(const std::filesystem::path& units_csv,
                                const std::vector<ZoneSource>& zones,
                                const std::filesystem::path& forecasts_csv,
                                const std::filesystem::path& capacity_csv,
                                const MonthRange& window) {
  MarketInputs in;
  in.units = load_units(units_csv);
  for (const auto& z : zones) {
    if (!in.zone_region.emplace(z.zone, z.region).second) {
      throw SchemaError("zone " + z.zone + " listed twice");
    }
    in.history.emplace(z.zone, load_hourly_prices(z.hourly_prices, z.zone));
  }
  for (const auto& u : in.units) {
    auto it = in.zone_region.find(u.zone);
    if (it == in.zone_region.end()) {
      throw CoverageError("unit " + u.unit_id + " is in zone " + u.zone +
                          ", which has no hourly price file");
    }
    if (it->second != u.region) {
      throw SchemaError("unit " + u.unit_id + " is in region " + to_string(u.region) +
                        " but zone " + u.zone + " belongs to " + to_string(it->second));
    }
  }
  in.forecasts = MonthlyForecasts::load(forecasts_csv);
  in.book = CapacityAuctionBook::load(capacity_csv);
  in.book.extrapolate(window);
  return in;
}

MarketRun run_market(const MarketInputs& inputs, const MarketParams& params,
                     const ScenarioDefinition& cf_def, const ScenarioDefinition& cur_def) {
  MarketRun run;
  run.fleet = analysis_fleet(inputs.units);

  std::set<std::string> zones;
  for (const auto& u : run.fleet) zones.insert(u.zone);

  run.counterfactual.scenario = Scenario::kCounterfactual;
  run.current.scenario = Scenario::kCurrentExpectations;
  run.counterfactual.book = &inputs.book;
  run.current.book = &inputs.book;
  for (const auto& zone : zones) {
    const Region region = inputs.zone_region.at(zone);
    const ZonePrices& history = inputs.history.at(zone);
    run.counterfactual.zone_prices.emplace(
        zone, build_hourly_scenario(inputs.forecasts, history, region, cf_def, params.window));
    run.current.zone_prices.emplace(
        zone, build_hourly_scenario(inputs.forecasts, history, region, cur_def, params.window));
  }

  run.counterfactual_ledgers = fleet_profitability(run.fleet, run.counterfactual, params);
  run.current_ledgers = fleet_profitability(run.fleet, run.current, params);
  run.report = classify_at_risk(run.fleet, run.counterfactual_ledgers, run.current_ledgers, params);
  return run;
}

std::string ledger_csv(const std::vector<CashFlowLedger>& counterfactual,
                       const std::vector<CashFlowLedger>& current, const MarketParams& params) {
  std::ostringstream out;
  out << "unit_id,scenario,month,m,electricity_revenue,capacity_revenue,variable_cost,fixed_cost,"
         "net,online_hours\n";
  for (const auto* set : {&counterfactual, &current}) {
    for (const auto& l : *set) {
      for (const auto& row : l.months) {
        out << l.unit_id << ',' << to_string(l.scenario) << ',' << row.month.str() << ','
            << month_index(row.month, params.window) << ',' << num(row.electricity_revenue) << ','
            << num(row.capacity_revenue) << ',' << num(row.variable_cost) << ','
            << num(row.fixed_cost) << ',' << num(row.net) << ',' << row.online_hours << '\n';
      }
    }
  }
  return out.str();
}

std::string unit_summary_csv(const MarketRun& run) {
  const auto& at_risk = run.report.at_risk_units;
  std::ostringstream out;
  out << "unit_id,pv_counterfactual,pv_current,at_risk\n";
  for (std::size_t i = 0; i < run.fleet.size(); ++i) {
    const auto& id = run.fleet[i].unit_id;
    const bool risk = std::find(at_risk.begin(), at_risk.end(), id) != at_risk.end();
    out << id << ',' << num(run.counterfactual_ledgers[i].present_value) << ','
        << num(run.current_ledgers[i].present_value) << ',' << (risk ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string fleet_monthly_csv(const AtRiskReport& report) {
  std::ostringstream out;
  out << "scenario,month,revenue,cost,profit\n";
  auto emit = [&](const char* name, const std::vector<FleetMonth>& stream) {
    for (const auto& m : stream) {
      out << name << ',' << m.month.str() << ',' << num(m.revenue) << ',' << num(m.cost) << ','
          << num(m.profit) << '\n';
    }
  };
  emit("counterfactual", report.counterfactual_monthly);
  emit("current_expectations", report.current_monthly);
  return out.str();
}

}  // namespace powercf::market
