#pragma once

#include <cmath>
#include <span>

#include "powercf/calendar.hpp"
#include "powercf/market/units.hpp"

namespace powercf::market {

/// 1 / (1 + r)^m, with m = 1 for the first month of the analysis window.
inline double discount_factor(int month_index, double monthly_rate) {
  return 1.0 / std::pow(1.0 + monthly_rate, double(month_index));
}

inline int month_index(YearMonth m, const MonthRange& window) { return m - window.first + 1; }

/// sum_m L_m / (1 + r)^m over m = 1..n.
inline double present_value(std::span<const double> net_cash_flows, double monthly_rate) {
  double pv = 0.0;
  for (std::size_t i = 0; i < net_cash_flows.size(); ++i) {
    pv += net_cash_flows[i] * discount_factor(int(i) + 1, monthly_rate);
  }
  return pv;
}

/// Annual fixed O&M / 12 for in-service months, zero before.
inline double monthly_fixed_cost(const GenerationUnit& unit, YearMonth m) {
  if (!unit.in_service_during(m)) return 0.0;
  return unit.fixed_om_per_mw_year * unit.capacity_mw / 12.0;
}

/// (1 + monthly)^12 - 1.
inline double annualized_rate(double monthly_rate) { return std::pow(1.0 + monthly_rate, 12.0) - 1.0; }

}  // namespace powercf::market
