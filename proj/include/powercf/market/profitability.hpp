#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "powercf/market/capacity.hpp"
#include "powercf/market/prices.hpp"
#include "powercf/market/units.hpp"

namespace powercf::market {

struct MarketParams {
  MonthRange window = kAnalysisWindow;
  double monthly_rate = kMonthlyWacc;
};

/// Prices and auction book for one scenario.
struct ScenarioBundle {
  Scenario scenario = Scenario::kCounterfactual;
  std::map<std::string, HourlyPriceSeries> zone_prices;  // by zone
  const CapacityAuctionBook* book = nullptr;

  const HourlyPriceSeries& prices(const std::string& zone) const;
};

struct LedgerMonth {
  YearMonth month;
  double electricity_revenue = 0.0;  // E
  double capacity_revenue = 0.0;     // C
  double variable_cost = 0.0;        // V
  double fixed_cost = 0.0;           // F
  double net = 0.0;                  // L = (E + C) - (V + F)
  int online_hours = 0;
};

struct CpBid {
  CommitmentPeriod cp;
  double bid = 0.0;
  double clearing_price = 0.0;
  bool cleared = false;
};

struct CashFlowLedger {
  std::string unit_id;
  Scenario scenario = Scenario::kCounterfactual;
  std::vector<LedgerMonth> months;
  std::vector<CpBid> bids;
  double present_value = 0.0;  // P_u
};

/// Monthly E, C, V, F and net cash flow over the window, discounted with
/// m = 1 at the first window month.
CashFlowLedger unit_profitability(const GenerationUnit& unit, const ScenarioBundle& bundle,
                                  const MarketParams& params = {});

/// unit_profitability over the fleet, units distributed across OpenMP threads.
std::vector<CashFlowLedger> fleet_profitability(const std::vector<GenerationUnit>& fleet,
                                                const ScenarioBundle& bundle,
                                                const MarketParams& params = {});

/// Single-threaded reference for fleet_profitability.
std::vector<CashFlowLedger> fleet_profitability_serial(const std::vector<GenerationUnit>& fleet,
                                                       const ScenarioBundle& bundle,
                                                       const MarketParams& params = {});

struct FleetMonth {
  YearMonth month;
  double revenue = 0.0;  // E + C
  double cost = 0.0;     // V + F
  double profit = 0.0;   // L
};

struct AtRiskReport {
  std::vector<std::string> at_risk_units;
  double at_risk_mw = 0.0;
  double fleet_mw = 0.0;
  double share_of_fleet_mw = 0.0;
  double mean_age_years = 0.0;     // at the first window month
  double mean_capacity_mw = 0.0;
  std::map<std::string, int> per_zone;
  std::map<std::string, int> per_region;
  std::vector<FleetMonth> counterfactual_monthly;
  std::vector<FleetMonth> current_monthly;
  double pv_counterfactual = 0.0;
  double pv_current = 0.0;
  double pv_delta = 0.0;                 // counterfactual - current
  double pv_delta_first_year = 0.0;      // months of the window's first calendar year

  nlohmann::ordered_json to_json() const;
};

/// At risk: P_u >= 0 under counterfactual prices and P_u < 0 under current
/// expectations. Ledgers must cover the same fleet in the same order.
AtRiskReport classify_at_risk(const std::vector<GenerationUnit>& fleet,
                              const std::vector<CashFlowLedger>& counterfactual,
                              const std::vector<CashFlowLedger>& current,
                              const MarketParams& params = {});

}  // namespace powercf::market
