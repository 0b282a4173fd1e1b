#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "powercf/calendar.hpp"
#include "powercf/series.hpp"

namespace powercf::ingest {

enum class FuelCategory { kCoal, kGas, kOil, kOther };

std::string to_string(FuelCategory c);
FuelCategory fuel_category_from_string(const std::string& name);
inline bool is_fossil(FuelCategory c) { return c != FuelCategory::kOther; }

/// Category of an EIA-923 energy source code, if the code is recognised.
/// Petroleum liquids and petroleum coke map to oil.
std::optional<FuelCategory> builtin_category(const std::string& fuel_code);

/// The 48 contiguous states plus DC.
const std::set<std::string>& contiguous_states();

struct PlantFuelMonth {
  std::string plant_id;
  std::string state;
  std::string fuel_code;
  YearMonth month;
  double generation_mwh = 0.0;
  double fuel_consumed_mmbtu = 0.0;
  /// Net generation below zero (station use exceeding output); passed through.
  bool negative_generation = false;
};

struct EmissionFactor {
  double kg_co2_per_mmbtu = 0.0;
  FuelCategory category = FuelCategory::kOther;
  std::string provenance;
};

struct EmissionFactorTable {
  std::map<std::string, EmissionFactor> factors;

  /// Columns fuel_code, kg_co2_per_mmbtu; optional category, provenance.
  /// Codes without a category column fall back to the built-in EIA map.
  static EmissionFactorTable load(const std::filesystem::path& path);
  static EmissionFactorTable parse(std::string_view csv_text);
  const EmissionFactor* find(const std::string& fuel_code) const;
  /// Category from the table, then the built-in map.
  std::optional<FuelCategory> category(const std::string& fuel_code) const;
};

struct LoadOptions {
  std::set<std::string> states = contiguous_states();
  std::optional<MonthRange> window;
  /// canonical column name -> column name in the file, for real downloads
  /// whose headers differ.
  std::map<std::string, std::string> column_map;
};

struct LoadReport {
  std::size_t rows_read = 0;
  std::size_t rows_kept = 0;
  std::size_t rows_outside_states = 0;
  std::size_t rows_outside_window = 0;
  std::size_t negative_generation_rows = 0;
  /// Unknown fuel code -> number of rows carrying it.
  std::map<std::string, std::size_t> unknown_fuel_codes;

  std::size_t warning_count() const { return unknown_fuel_codes.size(); }
  nlohmann::ordered_json to_json() const;
};

struct GenerationData {
  std::vector<PlantFuelMonth> records;
  LoadReport report;
};

/// Parses the generation CSV (plant_id, state, year, month, fuel_code,
/// generation_mwh, fuel_consumed_mmbtu). Rows outside the state whitelist or
/// the window are filtered and counted; unknown fuel codes are kept and
/// reported. `factors` extends the set of recognised codes.
GenerationData load_generation(const std::filesystem::path& path, const LoadOptions& options = {},
                               const EmissionFactorTable* factors = nullptr);
GenerationData parse_generation(std::string_view csv_text, const LoadOptions& options = {},
                                const EmissionFactorTable* factors = nullptr);

struct PlantEmission {
  std::string plant_id;
  std::string fuel_code;
  YearMonth month;
  FuelCategory category = FuelCategory::kOther;
  double emissions_kg = 0.0;
};

/// emissions = fuel consumed * factor for fossil codes; zero for non-fossil
/// and unrecognised codes. A fossil code missing from `factors` throws
/// SchemaError.
std::vector<PlantEmission> compute_emissions(const std::vector<PlantFuelMonth>& records,
                                             const EmissionFactorTable& factors);

struct DegreeDays {
  double hdd = 0.0;
  double cdd = 0.0;
};
std::map<YearMonth, DegreeDays> load_degree_days(const std::filesystem::path& path);
std::map<YearMonth, DegreeDays> parse_degree_days(std::string_view csv_text);

/// monthly_total * 365 / days_in_month.
double annualize(double monthly_total, YearMonth month);

/// Builds C, E, C_over_E, HDD, CDD, C_coal, C_gas and C_oil over `window`.
/// C-type series are MMT CO2 annualized, E is TWh annualized, C_over_E is
/// kg/MWh from unannualized sums. Any month without data throws CoverageError.
SeriesBundle aggregate_series(const std::vector<PlantEmission>& emissions,
                              const std::vector<PlantFuelMonth>& records,
                              const std::map<YearMonth, DegreeDays>& degree_days,
                              const MonthRange& window);

}  // namespace powercf::ingest
