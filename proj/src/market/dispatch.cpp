#include "powercf/market/dispatch.hpp"

#include <algorithm>
#include <functional>

namespace powercf::market {

std::vector<double> price_duration_curve(std::span<const double> prices) {
  std::vector<double> pdc(prices.begin(), prices.end());
  std::sort(pdc.begin(), pdc.end(), std::greater<>());
  return pdc;
}

DispatchResult monthly_dispatch(const GenerationUnit& unit, std::span<const double> prices) {
  DispatchResult r;
  const double vc = unit.variable_cost_per_mwh;
  for (double p : prices) {
    if (p >= vc) {
      r.electricity_revenue += p * unit.capacity_mw;
      ++r.online_hours;
    }
  }
  r.variable_cost = double(r.online_hours) * vc * unit.capacity_mw;
  return r;
}

DispatchResult pdc_dispatch(const GenerationUnit& unit, std::span<const double> pdc) {
  DispatchResult r;
  const double vc = unit.variable_cost_per_mwh;
  // First position whose price drops below the variable cost.
  const auto cut = std::partition_point(pdc.begin(), pdc.end(), [vc](double p) { return p >= vc; });
  r.online_hours = int(cut - pdc.begin());
  for (auto it = pdc.begin(); it != cut; ++it) r.electricity_revenue += *it * unit.capacity_mw;
  r.variable_cost = double(r.online_hours) * vc * unit.capacity_mw;
  return r;
}

}  // namespace powercf::market
