#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "powercf/market/capacity.hpp"
#include "powercf/market/prices.hpp"
#include "powercf/market/profitability.hpp"
#include "powercf/market/units.hpp"

namespace powercf::market {

struct ZoneSource {
  std::string zone;
  Region region = Region::kPjm;
  std::filesystem::path hourly_prices;
};

struct MarketInputs {
  std::vector<GenerationUnit> units;
  std::map<std::string, Region> zone_region;
  std::map<std::string, ZonePrices> history;  // by zone
  MonthlyForecasts forecasts;
  CapacityAuctionBook book;  // extrapolated over the window
};

MarketInputs load_market_inputs(const std::filesystem::path& units_csv,
                                const std::vector<ZoneSource>& zones,
                                const std::filesystem::path& forecasts_csv,
                                const std::filesystem::path& capacity_csv,
                                const MonthRange& window = kAnalysisWindow);

struct MarketRun {
  std::vector<GenerationUnit> fleet;
  ScenarioBundle counterfactual;
  ScenarioBundle current;
  std::vector<CashFlowLedger> counterfactual_ledgers;
  std::vector<CashFlowLedger> current_ledgers;
  AtRiskReport report;
};

/// Both scenarios end to end. `inputs` must outlive the result (the
/// scenario bundles refer to its auction book).
MarketRun run_market(const MarketInputs& inputs, const MarketParams& params = {},
                     const ScenarioDefinition& counterfactual = ScenarioDefinition::counterfactual(),
                     const ScenarioDefinition& current =
                         ScenarioDefinition::current_expectations());

/// unit_id,scenario,month,m,electricity_revenue,capacity_revenue,variable_cost,fixed_cost,net,online_hours
std::string ledger_csv(const std::vector<CashFlowLedger>& counterfactual,
                       const std::vector<CashFlowLedger>& current, const MarketParams& params = {});

/// unit_id,pv_counterfactual,pv_current,at_risk
std::string unit_summary_csv(const MarketRun& run);

/// scenario,month,revenue,cost,profit (fleet totals per month)
std::string fleet_monthly_csv(const AtRiskReport& report);

}  // namespace powercf::market
