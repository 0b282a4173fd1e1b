#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "powercf/calendar.hpp"
#include "powercf/market/prices.hpp"
#include "powercf/market/units.hpp"

namespace powercf::market {

/// A capacity commitment period. All regional calendars start on the first
/// and end on the last day of a month, so a period is a month range.
struct CommitmentPeriod {
  MonthRange months;
  std::string season;  // "annual", "summer" or "winter"

  Date start() const;
  Date end() const;
  std::string label() const;  // "2020-06..2021-05"
  friend bool operator==(const CommitmentPeriod&, const CommitmentPeriod&) = default;
};

/// Periods of the region's auction calendar that overlap `window`, in order.
/// MISO, ISO-NE, PJM: Jun 1 - May 31. NYISO: winter Nov 1 - Apr 30 and
/// summer May 1 - Oct 31. Regions without a capacity market: empty.
std::vector<CommitmentPeriod> commitment_calendar(Region region, const MonthRange& window);

/// Number of prior periods averaged when a clearing price is not yet known:
/// PJM 5, MISO 4, NYISO 3 per season; ISO-NE 0 (actuals required).
int extrapolation_lookback(Region region);

struct CapacityPrice {
  Region region = Region::kPjm;
  std::string zone;
  CommitmentPeriod cp;
  double clearing_usd_per_mw_day = 0.0;  // G_{cp,z}
  std::string provenance = "actual";     // or "extrapolated-average"
};

class CapacityAuctionBook {
 public:
  /// capacity-prices CSV: region, zone, cp_start, cp_end,
  /// clearing_usd_per_mw_day, provenance.
  static CapacityAuctionBook load(const std::filesystem::path& path);
  static CapacityAuctionBook parse(std::string_view csv_text);

  /// Throws SchemaError if the period is off-calendar or overlaps another.
  void add(CapacityPrice price);

  /// Fills every calendar period overlapping `window` that has no price with
  /// the mean of the most recent extrapolation_lookback() actual periods
  /// (same season for NYISO). Throws CoverageError if too few exist.
  void extrapolate(const MonthRange& window);

  /// Price in force for the zone in month m; CoverageError when none.
  const CapacityPrice& price(Region region, const std::string& zone, YearMonth m) const;
  const CapacityPrice* find(Region region, const std::string& zone, YearMonth m) const;

  const std::vector<CapacityPrice>& entries() const { return entries_; }

 private:
  std::vector<CapacityPrice> entries_;
};

/// Present values over the part of a commitment period inside the window.
struct CpCashFlows {
  double pv_energy_revenue = 0.0;  // E_cp
  double pv_variable_cost = 0.0;   // V_cp
  double pv_fixed_cost = 0.0;      // F_cp
  double pv_mw_days = 0.0;         // PV of O_u * days, the value of $1/MW-day
};

CpCashFlows cp_cash_flows(const GenerationUnit& unit, const CommitmentPeriod& cp,
                          const ZonePrices& scenario_prices, const MonthRange& window,
                          double monthly_rate);

/// Zero when energy revenue covers variable and fixed cost; otherwise the
/// constant $/MW-day whose PV over the period equals the shortfall.
double bid_from_cash_flows(const CpCashFlows& flows);

/// Capacity bid in $/MW-day for `unit` in `cp`, valued on the
/// scenario's own prices. CoverageError when the period misses the window.
double capacity_bid(const GenerationUnit& unit, const CommitmentPeriod& cp,
                    const ZonePrices& scenario_prices, const MonthRange& window = kAnalysisWindow,
                    double monthly_rate = kMonthlyWacc);

/// Revenue per month of the period (inside the window): G * O_u * days when
/// the bid clears (bid <= G), else zero.
std::vector<std::pair<YearMonth, double>> capacity_revenue(const GenerationUnit& unit,
                                                           const CommitmentPeriod& cp,
                                                           const CapacityAuctionBook& book,
                                                           double bid,
                                                           const MonthRange& window = kAnalysisWindow);

}  // namespace powercf::market
