#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "powercf/calendar.hpp"

namespace powercf {

namespace label {
inline constexpr const char* kC = "C";
inline constexpr const char* kE = "E";
inline constexpr const char* kCOverE = "C_over_E";
inline constexpr const char* kHdd = "HDD";
inline constexpr const char* kCdd = "CDD";
inline constexpr const char* kCCoal = "C_coal";
inline constexpr const char* kCGas = "C_gas";
inline constexpr const char* kCOil = "C_oil";
}  // namespace label

/// Contiguous month-indexed values.
struct MonthlySeries {
  std::string label;
  std::string units;
  YearMonth start;
  std::vector<double> values;

  int size() const { return int(values.size()); }
  YearMonth month(int i) const { return start + i; }
  YearMonth end() const { return start + (size() - 1); }
  MonthRange range() const { return {start, end()}; }
  bool covers(const MonthRange& r) const { return size() > 0 && range().contains(r); }
  /// Throws CoverageError when the month is outside the series.
  double at(YearMonth m) const;
  std::vector<double> slice(const MonthRange& r) const;
};

/// The canonical series file: every series plus provenance stamps.
struct SeriesBundle {
  std::map<std::string, MonthlySeries> series;
  std::string config_hash;
  std::uint64_t seed = 0;
  nlohmann::ordered_json validation;  // ingest report, carried through

  const MonthlySeries& get(const std::string& label) const;
  bool has(const std::string& label) const { return series.count(label) != 0; }

  nlohmann::ordered_json to_json() const;
  static SeriesBundle from_json(const nlohmann::ordered_json& doc);
  /// Serialised text, 2-space indented, trailing newline. Deterministic.
  std::string dump() const;
  static SeriesBundle load(const std::filesystem::path& path);
};

}  // namespace powercf
