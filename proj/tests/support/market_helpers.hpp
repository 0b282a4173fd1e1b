#pragma once

#include <random>

#include "powercf/market/capacity.hpp"
#include "powercf/market/dispatch.hpp"
#include "powercf/market/prices.hpp"
#include "powercf/market/units.hpp"

namespace testing_support {

inline powercf::market::GenerationUnit make_unit(std::string id, powercf::market::Region region,
                                                 std::string zone, double mw, double vc,
                                                 double fixed_per_mw_year,
                                                 powercf::YearMonth in_service = {1980, 1}) {
  powercf::market::GenerationUnit u;
  u.unit_id = std::move(id);
  u.region = region;
  u.zone = std::move(zone);
  u.capacity_mw = mw;
  u.variable_cost_per_mwh = vc;
  u.fixed_om_per_mw_year = fixed_per_mw_year;
  u.in_service = in_service;
  return u;
}

/// Random hourly prices for every month in [first, last].
inline powercf::market::ZonePrices random_prices(std::mt19937_64& rng, std::string zone,
                                                 powercf::MonthRange range, double level = 30.0,
                                                 double spread = 15.0) {
  std::normal_distribution<double> noise(0.0, spread);
  powercf::market::ZonePrices z;
  z.zone = std::move(zone);
  for (auto m = range.first; m <= range.last; ++m) {
    std::vector<double> hours(std::size_t(m.days() * 24));
    for (std::size_t h = 0; h < hours.size(); ++h) {
      hours[h] = level + 10.0 * std::sin(double(h % 24) / 24.0 * 6.283185307179586) + noise(rng);
    }
    z.months[m] = std::move(hours);
  }
  return z;
}

inline powercf::market::ZonePrices constant_prices(std::string zone, powercf::MonthRange range,
                                                   double price) {
  powercf::market::ZonePrices z;
  z.zone = std::move(zone);
  for (auto m = range.first; m <= range.last; ++m) {
    z.months[m] = std::vector<double>(std::size_t(m.days() * 24), price);
  }
  return z;
}

/// Hour-by-hour reference: run when price >= variable cost.
inline powercf::market::DispatchResult brute_force_dispatch(
    const powercf::market::GenerationUnit& unit, const std::vector<double>& prices) {
  powercf::market::DispatchResult r;
  for (double p : prices) {
    if (p >= unit.variable_cost_per_mwh) {
      r.electricity_revenue += p * unit.capacity_mw;
      r.online_hours += 1;
    }
  }
  r.variable_cost = double(r.online_hours) * unit.variable_cost_per_mwh * unit.capacity_mw;
  return r;
}

}  // namespace testing_support
