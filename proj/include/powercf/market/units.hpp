#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "powercf/calendar.hpp"

namespace powercf::market {

enum class Region { kCaiso, kErcot, kSpp, kMiso, kIsoNe, kNyiso, kPjm };

std::string to_string(Region r);
/// Accepts CAISO, ERCOT, SPP, MISO, NE/ISO-NE/ISONE, NY/NYISO, PJM.
Region region_from_string(std::string_view name);
/// MISO, ISO-NE, NYISO and PJM run forward capacity auctions.
bool has_capacity_market(Region r);

enum class Scenario { kCounterfactual, kCurrentExpectations };
std::string to_string(Scenario s);

/// Mar 2020 .. Dec 2022, 34 months.
inline constexpr MonthRange kAnalysisWindow{{2020, 3}, {2022, 12}};
/// Monthly WACC applied to cash flows; derived from the 4.61% annual rate.
inline constexpr double kMonthlyWacc = 0.0038;
inline constexpr double kAnnualWacc = 0.0461;

struct GenerationUnit {
  std::string unit_id;
  Region region = Region::kPjm;
  std::string zone;
  double capacity_mw = 0.0;               // O_u
  double variable_cost_per_mwh = 0.0;
  double fixed_om_per_mw_year = 0.0;
  YearMonth in_service;
  bool cogeneration = false;

  bool in_service_during(YearMonth m) const { return in_service <= m; }
  double age_years_at(YearMonth m) const { return double(m - in_service) / 12.0; }
};

/// units CSV: unit_id, region, zone, capacity_mw, variable_cost_usd_per_mwh,
/// fixed_om_usd_per_mw_year, in_service (YYYY-MM), cogen (0/1/true/false).
std::vector<GenerationUnit> load_units(const std::filesystem::path& path);
std::vector<GenerationUnit> parse_units(std::string_view csv_text);

/// Units entering the profitability analysis: cogeneration units removed.
std::vector<GenerationUnit> analysis_fleet(const std::vector<GenerationUnit>& units);

}  // namespace powercf::market
