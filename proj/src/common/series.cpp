#include "powercf/series.hpp"

#include <fstream>
#include <sstream>

#include "powercf/errors.hpp"

namespace powercf {

using json = nlohmann::ordered_json;

double MonthlySeries::at(YearMonth m) const {
  const int i = m - start;
  if (i < 0 || i >= size()) {
    throw CoverageError("series " + label + " has no value for " + m.str());
  }
  return values[std::size_t(i)];
}

std::vector<double> MonthlySeries::slice(const MonthRange& r) const {
  if (!covers(r)) {
    throw CoverageError("series " + label + " (" + start.str() + ".." + end().str() +
                        ") does not cover " + r.first.str() + ".." + r.last.str());
  }
  const auto first = values.begin() + (r.first - start);
  return {first, first + r.size()};
}

const MonthlySeries& SeriesBundle::get(const std::string& name) const {
  auto it = series.find(name);
  if (it == series.end()) throw SchemaError("series bundle has no series labelled '" + name + "'");
  return it->second;
}

json SeriesBundle::to_json() const {
  json out;
  out["format"] = "powercf.series/1";
  out["config_hash"] = config_hash;
  out["seed"] = seed;
  json all = json::object();
  for (const auto& [name, s] : series) {
    json months = json::array();
    for (int i = 0; i < s.size(); ++i) months.push_back(s.month(i).str());
    all[name] = {{"units", s.units}, {"months", std::move(months)}, {"values", s.values}};
  }
  out["series"] = std::move(all);
  if (!validation.is_null()) out["validation"] = validation;
  return out;
}

SeriesBundle SeriesBundle::from_json(const json& doc) {
  SeriesBundle b;
  try {
    b.config_hash = doc.value("config_hash", std::string{});
    b.seed = doc.value("seed", std::uint64_t{0});
    if (doc.contains("validation")) b.validation = doc.at("validation");
    for (const auto& [name, js] : doc.at("series").items()) {
      MonthlySeries s;
      s.label = name;
      s.units = js.value("units", std::string{});
      const auto months = js.at("months").get<std::vector<std::string>>();
      s.values = js.at("values").get<std::vector<double>>();
      if (months.size() != s.values.size()) {
        throw SchemaError("series " + name + ": months and values differ in length");
      }
      if (!months.empty()) {
        s.start = YearMonth::parse(months.front());
        for (std::size_t i = 0; i < months.size(); ++i) {
          if (YearMonth::parse(months[i]) != s.start + int(i)) {
            throw CoverageError("series " + name + " has a gap or disorder at " + months[i]);
          }
        }
      }
      b.series.emplace(name, std::move(s));
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed series document: ") + e.what());
  }
  return b;
}

std::string SeriesBundle::dump() const { return to_json().dump(2) + "\n"; }

SeriesBundle SeriesBundle::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open series file '" + path.string() + "'");
  try {
    return from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw SchemaError("series file '" + path.string() + "': " + e.what());
  }
}

}  // namespace powercf
