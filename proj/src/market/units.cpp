#include "powercf/market/units.hpp"

#include <algorithm>
#include <set>

#include "powercf/csv.hpp"
#include "powercf/errors.hpp"

namespace powercf::market {
namespace {

bool parse_flag(const CsvTable& table, const CsvTable::Row& row, std::string_view column) {
  std::string v = table.text(row, column);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "1" || v == "true" || v == "yes" || v == "y") return true;
  if (v == "0" || v == "false" || v == "no" || v == "n" || v.empty()) return false;
  throw SchemaError(table.source() + ":" + std::to_string(row.line) + ": cannot parse flag '" + v +
                    "'");
}

std::vector<GenerationUnit> units_from(const CsvTable& table) {
  table.require({"unit_id", "region", "zone", "capacity_mw", "variable_cost_usd_per_mwh",
                 "fixed_om_usd_per_mw_year", "in_service", "cogen"});
  std::vector<GenerationUnit> units;
  std::set<std::string> seen;
  for (const auto& row : table.rows()) {
    const auto where = table.source() + ":" + std::to_string(row.line);
    GenerationUnit u;
    u.unit_id = table.text(row, "unit_id");
    try {
      u.region = region_from_string(table.text(row, "region"));
      u.in_service = YearMonth::parse(table.text(row, "in_service"));
    } catch (const SchemaError& e) {
      throw SchemaError(where + ": " + e.what());
    }
    u.zone = table.text(row, "zone");
    u.capacity_mw = table.number(row, "capacity_mw");
    u.variable_cost_per_mwh = table.number(row, "variable_cost_usd_per_mwh");
    u.fixed_om_per_mw_year = table.number(row, "fixed_om_usd_per_mw_year");
    u.cogeneration = parse_flag(table, row, "cogen");
    if (!(u.capacity_mw > 0.0)) throw SchemaError(where + ": capacity_mw must be > 0");
    if (u.variable_cost_per_mwh < 0.0 || u.fixed_om_per_mw_year < 0.0) {
      throw SchemaError(where + ": costs must be >= 0");
    }
    if (!seen.insert(u.unit_id).second) {
      throw SchemaError(where + ": duplicate unit_id '" + u.unit_id + "'");
    }
    units.push_back(std::move(u));
  }
  return units;
}

}  // namespace

std::string to_string(Region r) {
  switch (r) {
    case Region::kCaiso: return "CAISO";
    case Region::kErcot: return "ERCOT";
    case Region::kSpp: return "SPP";
    case Region::kMiso: return "MISO";
    case Region::kIsoNe: return "NE";
    case Region::kNyiso: return "NY";
    case Region::kPjm: return "PJM";
  }
  return "?";
}

Region region_from_string(std::string_view name) {
  if (name == "CAISO") return Region::kCaiso;
  if (name == "ERCOT") return Region::kErcot;
  if (name == "SPP") return Region::kSpp;
  if (name == "MISO") return Region::kMiso;
  if (name == "NE" || name == "ISO-NE" || name == "ISONE") return Region::kIsoNe;
  if (name == "NY" || name == "NYISO") return Region::kNyiso;
  if (name == "PJM") return Region::kPjm;
  throw SchemaError("unknown market region '" + std::string(name) + "'");
}

bool has_capacity_market(Region r) {
  return r == Region::kMiso || r == Region::kIsoNe || r == Region::kNyiso || r == Region::kPjm;
}

std::string to_string(Scenario s) {
  return s == Scenario::kCounterfactual ? "counterfactual" : "current_expectations";
}

std::vector<GenerationUnit> load_units(const std::filesystem::path& path) {
  return units_from(CsvTable::read(path));
}

std::vector<GenerationUnit> parse_units(std::string_view csv_text) {
  return units_from(CsvTable::parse(csv_text, "<units>"));
}

std::vector<GenerationUnit> analysis_fleet(const std::vector<GenerationUnit>& units) {
  std::vector<GenerationUnit> out;
  std::copy_if(units.begin(), units.end(), std::back_inserter(out),
               [](const GenerationUnit& u) { return !u.cogeneration; });
  return out;
}

}  // namespace powercf::market
