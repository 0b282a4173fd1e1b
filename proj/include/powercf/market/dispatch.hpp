#pragma once

#include <span>
#include <vector>

#include "powercf/market/units.hpp"

namespace powercf::market {

/// Hourly prices sorted from highest to lowest.
std::vector<double> price_duration_curve(std::span<const double> prices);

struct DispatchResult {
  double electricity_revenue = 0.0;  // sum over online hours of price * O_u
  double variable_cost = 0.0;        // online hours * variable cost * O_u
  int online_hours = 0;

  double energy_profit() const { return electricity_revenue - variable_cost; }
};

/// The unit runs at full capacity in every hour whose price is at least its
/// variable cost. Hour order does not matter beyond floating-point summation.
DispatchResult monthly_dispatch(const GenerationUnit& unit, std::span<const double> prices);

/// Online hours and energy profit read off the price duration curve: the
/// online hours are the PDC prefix at or above the variable cost.
DispatchResult pdc_dispatch(const GenerationUnit& unit, std::span<const double> pdc);

}  // namespace powercf::market
