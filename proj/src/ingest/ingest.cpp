#include "powercf/ingest.hpp"

#include <algorithm>
#include <tuple>
#include <unordered_map>

#include "powercf/csv.hpp"
#include "powercf/errors.hpp"

namespace powercf::ingest {
namespace {

const std::unordered_map<std::string, FuelCategory>& builtin_codes() {
  static const std::unordered_map<std::string, FuelCategory> codes = [] {
    std::unordered_map<std::string, FuelCategory> m;
    for (auto c : {"ANT", "BIT", "LIG", "SUB", "SGC", "WC", "RC", "SC"}) m[c] = FuelCategory::kCoal;
    for (auto c : {"NG", "OG", "BFG", "PG"}) m[c] = FuelCategory::kGas;
    for (auto c : {"DFO", "RFO", "JF", "KER", "WO", "PC", "SGP"}) m[c] = FuelCategory::kOil;
    for (auto c : {"NUC", "WAT", "SUN", "WND", "GEO", "MWH", "WDS", "WDL", "BLQ", "AB", "MSW",
                   "MSB", "MSN", "OBS", "OBL", "OBG", "LFG", "TDF", "PUR", "OTH", "SLW", "WH"}) {
      m[c] = FuelCategory::kOther;
    }
    return m;
  }();
  return codes;
}

struct Columns {
  std::string plant_id, state, year, month, fuel_code, generation, fuel;
};

Columns resolve(const LoadOptions& options) {
  auto pick = [&](const std::string& canonical) {
    auto it = options.column_map.find(canonical);
    return it == options.column_map.end() ? canonical : it->second;
  };
  return {pick("plant_id"),  pick("state"),          pick("year"),
          pick("month"),     pick("fuel_code"),      pick("generation_mwh"),
          pick("fuel_consumed_mmbtu")};
}

GenerationData parse_table(const CsvTable& table, const LoadOptions& options,
                           const EmissionFactorTable* factors) {
  const Columns col = resolve(options);
  table.require({col.plant_id, col.state, col.year, col.month, col.fuel_code, col.generation,
                 col.fuel});

  GenerationData out;
  for (const auto& row : table.rows()) {
    ++out.report.rows_read;
    PlantFuelMonth rec;
    rec.plant_id = table.text(row, col.plant_id);
    rec.state = table.text(row, col.state);
    rec.fuel_code = table.text(row, col.fuel_code);
    const int month = table.integer(row, col.month);
    if (month < 1 || month > 12) {
      throw SchemaError(table.source() + ":" + std::to_string(row.line) + ": month " +
                        std::to_string(month) + " out of range");
    }
    rec.month = {table.integer(row, col.year), month};
    rec.generation_mwh = table.number(row, col.generation);
    rec.fuel_consumed_mmbtu = table.number(row, col.fuel);
    if (rec.fuel_consumed_mmbtu < 0.0) {
      throw SchemaError(table.source() + ":" + std::to_string(row.line) +
                        ": negative fuel consumption");
    }

    if (!options.states.count(rec.state)) {
      ++out.report.rows_outside_states;
      continue;
    }
    if (options.window && !options.window->contains(rec.month)) {
      ++out.report.rows_outside_window;
      continue;
    }
    rec.negative_generation = rec.generation_mwh < 0.0;
    if (rec.negative_generation) ++out.report.negative_generation_rows;

    const bool known = builtin_category(rec.fuel_code).has_value() ||
                       (factors != nullptr && factors->find(rec.fuel_code) != nullptr);
    if (!known) ++out.report.unknown_fuel_codes[rec.fuel_code];

    out.records.push_back(std::move(rec));
  }
  out.report.rows_kept = out.records.size();
  return out;
}

}  // namespace

std::string to_string(FuelCategory c) {
  switch (c) {
    case FuelCategory::kCoal: return "coal";
    case FuelCategory::kGas: return "gas";
    case FuelCategory::kOil: return "oil";
    case FuelCategory::kOther: return "other";
  }
  return "other";
}

FuelCategory fuel_category_from_string(const std::string& name) {
  if (name == "coal") return FuelCategory::kCoal;
  if (name == "gas") return FuelCategory::kGas;
  if (name == "oil") return FuelCategory::kOil;
  if (name == "other") return FuelCategory::kOther;
  throw SchemaError("unknown fuel category '" + name + "'");
}

std::optional<FuelCategory> builtin_category(const std::string& fuel_code) {
  auto it = builtin_codes().find(fuel_code);
  if (it == builtin_codes().end()) return std::nullopt;
  return it->second;
}

const std::set<std::string>& contiguous_states() {
  static const std::set<std::string> states = {
      "AL", "AZ", "AR", "CA", "CO", "CT", "DE", "DC", "FL", "GA", "ID", "IL", "IN", "IA", "KS",
      "KY", "LA", "ME", "MD", "MA", "MI", "MN", "MS", "MO", "MT", "NE", "NV", "NH", "NJ", "NM",
      "NY", "NC", "ND", "OH", "OK", "OR", "PA", "RI", "SC", "SD", "TN", "TX", "UT", "VT", "VA",
      "WA", "WV", "WI", "WY"};
  return states;
}

namespace {

EmissionFactorTable factors_from(const CsvTable& table) {
  table.require({"fuel_code", "kg_co2_per_mmbtu"});
  EmissionFactorTable out;
  for (const auto& row : table.rows()) {
    EmissionFactor f;
    const std::string& code = table.text(row, "fuel_code");
    f.kg_co2_per_mmbtu = table.number(row, "kg_co2_per_mmbtu");
    if (f.kg_co2_per_mmbtu < 0.0) {
      throw SchemaError(table.source() + ":" + std::to_string(row.line) +
                        ": emission factor must be >= 0");
    }
    if (table.has("category") && !table.text(row, "category").empty()) {
      f.category = fuel_category_from_string(table.text(row, "category"));
    } else if (auto c = builtin_category(code)) {
      f.category = *c;
    } else {
      throw SchemaError(table.source() + ":" + std::to_string(row.line) + ": fuel code '" + code +
                        "' has no category column and is not a recognised EIA code");
    }
    f.provenance = table.has("provenance") ? table.text(row, "provenance") : "";
    if (!out.factors.emplace(code, f).second) {
      throw SchemaError(table.source() + ":" + std::to_string(row.line) + ": duplicate fuel code '" +
                        code + "'");
    }
  }
  return out;
}

}  // namespace

EmissionFactorTable EmissionFactorTable::load(const std::filesystem::path& path) {
  return factors_from(CsvTable::read(path));
}

EmissionFactorTable EmissionFactorTable::parse(std::string_view csv_text) {
  return factors_from(CsvTable::parse(csv_text, "<emission-factors>"));
}

const EmissionFactor* EmissionFactorTable::find(const std::string& fuel_code) const {
  auto it = factors.find(fuel_code);
  return it == factors.end() ? nullptr : &it->second;
}

std::optional<FuelCategory> EmissionFactorTable::category(const std::string& fuel_code) const {
  if (const auto* f = find(fuel_code)) return f->category;
  return builtin_category(fuel_code);
}

nlohmann::ordered_json LoadReport::to_json() const {
  nlohmann::ordered_json unknown = nlohmann::ordered_json::object();
  for (const auto& [code, n] : unknown_fuel_codes) unknown[code] = n;
  return {{"rows_read", rows_read},
          {"rows_kept", rows_kept},
          {"rows_outside_states", rows_outside_states},
          {"rows_outside_window", rows_outside_window},
          {"negative_generation_rows", negative_generation_rows},
          {"unknown_fuel_codes", std::move(unknown)},
          {"warning_count", warning_count()}};
}

GenerationData load_generation(const std::filesystem::path& path, const LoadOptions& options,
                               const EmissionFactorTable* factors) {
  return parse_table(CsvTable::read(path), options, factors);
}

GenerationData parse_generation(std::string_view csv_text, const LoadOptions& options,
                                const EmissionFactorTable* factors) {
  return parse_table(CsvTable::parse(csv_text, "<generation>"), options, factors);
}

std::vector<PlantEmission> compute_emissions(const std::vector<PlantFuelMonth>& records,
                                             const EmissionFactorTable& factors) {
  std::vector<PlantEmission> out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    PlantEmission e{rec.plant_id, rec.fuel_code, rec.month, FuelCategory::kOther, 0.0};
    const auto category = factors.category(rec.fuel_code);
    if (category && is_fossil(*category)) {
      const EmissionFactor* f = factors.find(rec.fuel_code);
      if (f == nullptr) {
        throw SchemaError("no emission factor for fossil fuel code '" + rec.fuel_code +
                          "' (plant " + rec.plant_id + ", " + rec.month.str() + ")");
      }
      e.category = *category;
      e.emissions_kg = rec.fuel_consumed_mmbtu * f->kg_co2_per_mmbtu;
    }
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

std::map<YearMonth, DegreeDays> degree_days_from(const CsvTable& table) {
  table.require({"year", "month", "hdd", "cdd"});
  std::map<YearMonth, DegreeDays> out;
  for (const auto& row : table.rows()) {
    const int month = table.integer(row, "month");
    if (month < 1 || month > 12) {
      throw SchemaError(table.source() + ":" + std::to_string(row.line) + ": month out of range");
    }
    const YearMonth ym{table.integer(row, "year"), month};
    const DegreeDays dd{table.number(row, "hdd"), table.number(row, "cdd")};
    if (!out.emplace(ym, dd).second) {
      throw SchemaError(table.source() + ":" + std::to_string(row.line) + ": duplicate month " +
                        ym.str());
    }
  }
  return out;
}

// Canonical order so sums do not depend on input row order.
template <typename T, typename Key>
std::vector<const T*> sorted_view(const std::vector<T>& items, Key key) {
  std::vector<const T*> view;
  view.reserve(items.size());
  for (const auto& it : items) view.push_back(&it);
  std::sort(view.begin(), view.end(), [&](const T* a, const T* b) { return key(*a) < key(*b); });
  return view;
}

}  // namespace

std::map<YearMonth, DegreeDays> load_degree_days(const std::filesystem::path& path) {
  return degree_days_from(CsvTable::read(path));
}

std::map<YearMonth, DegreeDays> parse_degree_days(std::string_view csv_text) {
  return degree_days_from(CsvTable::parse(csv_text, "<degree-days>"));
}

double annualize(double monthly_total, YearMonth month) {
  return monthly_total * 365.0 / double(month.days());
}

SeriesBundle aggregate_series(const std::vector<PlantEmission>& emissions,
                              const std::vector<PlantFuelMonth>& records,
                              const std::map<YearMonth, DegreeDays>& degree_days,
                              const MonthRange& window) {
  const int n = window.size();
  if (n <= 0) throw SchemaError("empty aggregation window");

  std::vector<double> coal(std::size_t(n), 0.0), gas(std::size_t(n), 0.0), oil(std::size_t(n), 0.0);
  std::vector<double> gen(std::size_t(n), 0.0);
  std::vector<bool> has_gen(std::size_t(n), false);

  const auto by_emission = [](const PlantEmission& e) {
    return std::tie(e.month, e.plant_id, e.fuel_code, e.emissions_kg);
  };
  for (const PlantEmission* e : sorted_view(emissions, by_emission)) {
    if (!window.contains(e->month)) continue;
    const auto i = std::size_t(e->month - window.first);
    switch (e->category) {
      case FuelCategory::kCoal: coal[i] += e->emissions_kg; break;
      case FuelCategory::kGas: gas[i] += e->emissions_kg; break;
      case FuelCategory::kOil: oil[i] += e->emissions_kg; break;
      case FuelCategory::kOther: break;
    }
  }
  const auto by_record = [](const PlantFuelMonth& r) {
    return std::tie(r.month, r.plant_id, r.fuel_code, r.generation_mwh, r.fuel_consumed_mmbtu);
  };
  for (const PlantFuelMonth* r : sorted_view(records, by_record)) {
    if (!window.contains(r->month)) continue;
    const auto i = std::size_t(r->month - window.first);
    gen[i] += r->generation_mwh;
    has_gen[i] = true;
  }

  auto make = [&](const char* name, const char* units) {
    MonthlySeries s;
    s.label = name;
    s.units = units;
    s.start = window.first;
    s.values.reserve(std::size_t(n));
    return s;
  };
  MonthlySeries c = make(label::kC, "MMT CO2, annualized");
  MonthlySeries c_coal = make(label::kCCoal, "MMT CO2, annualized");
  MonthlySeries c_gas = make(label::kCGas, "MMT CO2, annualized");
  MonthlySeries c_oil = make(label::kCOil, "MMT CO2, annualized");
  MonthlySeries e = make(label::kE, "TWh, annualized");
  MonthlySeries ce = make(label::kCOverE, "kg CO2/MWh");
  MonthlySeries hdd = make(label::kHdd, "population-weighted degree days");
  MonthlySeries cdd = make(label::kCdd, "population-weighted degree days");

  constexpr double kKgPerMmt = 1e9;
  constexpr double kMwhPerTwh = 1e6;
  for (int k = 0; k < n; ++k) {
    const auto i = std::size_t(k);
    const YearMonth m = window.first + k;
    if (!has_gen[i]) throw CoverageError("no generation records for " + m.str());
    auto dd = degree_days.find(m);
    if (dd == degree_days.end()) throw CoverageError("no degree-day data for " + m.str());
    if (gen[i] == 0.0) throw NumericalError("total generation is zero in " + m.str());

    const double total_kg = coal[i] + gas[i] + oil[i];
    c_coal.values.push_back(annualize(coal[i] / kKgPerMmt, m));
    c_gas.values.push_back(annualize(gas[i] / kKgPerMmt, m));
    c_oil.values.push_back(annualize(oil[i] / kKgPerMmt, m));
    c.values.push_back(annualize(total_kg / kKgPerMmt, m));
    e.values.push_back(annualize(gen[i] / kMwhPerTwh, m));
    ce.values.push_back(total_kg / gen[i]);
    hdd.values.push_back(dd->second.hdd);
    cdd.values.push_back(dd->second.cdd);
  }

  SeriesBundle bundle;
  for (auto* s : {&c, &e, &ce, &hdd, &cdd, &c_coal, &c_gas, &c_oil}) {
    bundle.series.emplace(s->label, std::move(*s));
  }
  return bundle;
}

}  // namespace powercf::ingest
