#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "powercf/counterfactual.hpp"
#include "powercf/errors.hpp"
#include "powercf/format.hpp"
#include "powercf/gp/serialize.hpp"
#include "powercf/hashing.hpp"
#include "powercf/ingest.hpp"
#include "powercf/market/io.hpp"

namespace powercf::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError("cannot write " + path.string());
  out << text;
  if (!out) throw SchemaError("write failed for " + path.string());
}

std::string stamp_line(const Config& c) {
  return "# config_hash=" + c.config_hash + " seed=" + std::to_string(c.seed) + "\n";
}

void write_csv(const fs::path& path, const Config& c, const std::string& body) {
  write_text(path, stamp_line(c) + body);
}

void write_json(const fs::path& path, const Config& c, json body) {
  json doc = {{"config_hash", c.config_hash}, {"seed", c.seed}};
  for (auto& [k, v] : body.items()) doc[k] = std::move(v);
  write_text(path, doc.dump(2) + "\n");
}

const json& section(const Config& c, const char* name) {
  if (!c.doc.contains(name) || !c.doc.at(name).is_object()) {
    throw SchemaError(std::string("config has no '") + name + "' section");
  }
  return c.doc.at(name);
}

std::string string_field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_string()) {
    throw SchemaError(where + ": '" + key + "' must be a string");
  }
  return obj.at(key).get<std::string>();
}

MonthRange month_range(const json& obj, const std::string& where) {
  return {YearMonth::parse(string_field(obj, "start", where)),
          YearMonth::parse(string_field(obj, "end", where))};
}

std::optional<MonthRange> optional_range(const json& sec, const char* key, const std::string& where) {
  if (!sec.contains(key)) return std::nullopt;
  return month_range(sec.at(key), where + "." + key);
}

std::vector<std::string> string_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw SchemaError(where + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw SchemaError(where + " must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::string safe_name(std::string s) {
  for (char& ch : s) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-') ch = '_';
  }
  return s;
}

}  // namespace

Config Config::load(const fs::path& path, std::optional<std::uint64_t> seed_override) {
  Config c;
  const std::string bytes = read_bytes(path);
  try {
    c.doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": invalid JSON: " + e.what());
  }
  if (!c.doc.is_object()) throw SchemaError(path.string() + ": config must be a JSON object");
  c.base_dir = fs::absolute(path).parent_path();
  c.config_hash = hex64(fnv1a64(bytes));
  if (seed_override) {
    c.seed = *seed_override;
  } else if (c.doc.contains("seed")) {
    if (!c.doc.at("seed").is_number_unsigned()) throw SchemaError("config 'seed' must be a u64");
    c.seed = c.doc.at("seed").get<std::uint64_t>();
  }
  return c;
}

fs::path Config::path(const json& sec, const std::string& key) const {
  fs::path p = string_field(sec, key, "config");
  if (p.is_relative()) p = base_dir / p;
  if (!fs::exists(p)) throw SchemaError("config '" + key + "': " + p.string() + " does not exist");
  return p;
}

void cmd_ingest(const Config& config, const Options& options, std::ostream& log) {
  const json& sec = section(config, "ingest");
  const auto factors = ingest::EmissionFactorTable::load(config.path(sec, "emission_factors"));

  ingest::LoadOptions load;
  const MonthRange window = month_range(sec.value("window", json::object()), "ingest.window");
  load.window = window;
  if (sec.contains("states")) {
    const auto states = string_list(sec.at("states"), "ingest.states");
    load.states = {states.begin(), states.end()};
  }
  if (sec.contains("column_map")) {
    for (const auto& [k, v] : sec.at("column_map").items()) {
      if (!v.is_string()) throw SchemaError("ingest.column_map values must be strings");
      load.column_map[k] = v.get<std::string>();
    }
  }
  const auto data = ingest::load_generation(config.path(sec, "generation"), load, &factors);
  const auto emissions = ingest::compute_emissions(data.records, factors);
  const auto dd = ingest::load_degree_days(config.path(sec, "degree_days"));

  SeriesBundle bundle = ingest::aggregate_series(emissions, data.records, dd, window);
  bundle.config_hash = config.config_hash;
  bundle.seed = config.seed;
  bundle.validation = data.report.to_json();

  write_text(options.out_dir / "series.json", bundle.dump());
  write_json(options.out_dir / "ingest_report.json", config,
             {{"window", {{"start", window.first.str()}, {"end", window.last.str()}}},
              {"report", data.report.to_json()}});
  log << "ingest: " << data.report.rows_kept << " of " << data.report.rows_read << " rows kept, "
      << data.report.warning_count() << " unknown fuel code(s); " << window.size()
      << " months written to " << (options.out_dir / "series.json").string() << "\n";
  for (const auto& [code, n] : data.report.unknown_fuel_codes) {
    log << "warning: unknown fuel code '" << code << "' on " << n << " row(s), treated as zero-emission\n";
  }
}

void cmd_counterfactual(const Config& config, const Options& options, std::ostream& log) {
  const json empty = json::object();
  const json& sec = config.doc.contains("counterfactual") ? config.doc.at("counterfactual") : empty;
  const fs::path series_path =
      sec.contains("series") ? config.path(sec, "series") : options.out_dir / "series.json";
  if (!fs::exists(series_path)) {
    throw CoverageError(series_path.string() + " not found; run 'ingest' first");
  }
  const SeriesBundle bundle = SeriesBundle::load(series_path);

  std::vector<std::string> targets = options.targets;
  if (targets.empty() && sec.contains("targets")) {
    targets = string_list(sec.at("targets"), "counterfactual.targets");
  }
  if (targets.empty()) targets = {label::kC, label::kE, label::kCOverE};

  counterfactual::ExperimentSpec base;
  if (auto r = optional_range(sec, "train", "counterfactual")) base.train = *r;
  if (auto r = optional_range(sec, "forecast", "counterfactual")) base.forecast = *r;
  if (sec.contains("covariates")) {
    base.covariates = string_list(sec.at("covariates"), "counterfactual.covariates");
  }
  base.fit.seed = config.seed;
  base.fit.n_restarts = sec.value("restarts", base.fit.n_restarts);
  base.validate();

  std::vector<counterfactual::ExperimentSpec> specs;
  for (const auto& t : targets) {
    if (!bundle.has(t)) throw SchemaError("series file has no series labelled '" + t + "'");
    auto s = base;
    s.target = t;
    specs.push_back(std::move(s));
  }
  const auto results = counterfactual::run_experiments(bundle, specs);

  std::vector<const counterfactual::ExperimentResult*> ptrs;
  json reports = json::array();
  json models = json::object();
  for (const auto& r : results) {
    ptrs.push_back(&r);
    reports.push_back(r.report.to_json());
    models[r.report.target] = gp::model_to_json(r.model);
    write_csv(options.out_dir / ("plot_" + safe_name(r.report.target) + ".csv"), config,
              counterfactual::plot_data_csv(r));
    log << "counterfactual: " << r.report.target << " average deviation "
        << fixed(r.report.average_percent_deviation, 2) << "%, " << r.report.significant_count()
        << " of " << r.report.months.size() << " months significant\n";
  }
  write_csv(options.out_dir / "deviations.csv", config, counterfactual::deviation_csv(ptrs));
  write_json(options.out_dir / "deviations.json", config,
             {{"train", {{"start", base.train.first.str()}, {"end", base.train.last.str()}}},
              {"forecast", {{"start", base.forecast.first.str()}, {"end", base.forecast.last.str()}}},
              {"reports", std::move(reports)}});
  write_json(options.out_dir / "models.json", config, {{"models", std::move(models)}});

  const bool split = sec.value("fuel_split", true) && bundle.has(label::kCCoal) &&
                     bundle.has(label::kCGas) && bundle.has(label::kCOil);
  if (split) {
    const auto fuels = counterfactual::fuel_split_experiment(bundle, base);
    write_csv(options.out_dir / "fuel_split.csv", config, counterfactual::fuel_split_csv(fuels));
    std::vector<const counterfactual::ExperimentResult*> fuel_ptrs;
    for (const auto& r : fuels.results) {
      fuel_ptrs.push_back(&r);
      write_csv(options.out_dir / ("plot_" + safe_name(r.report.target) + ".csv"), config,
                counterfactual::plot_data_csv(r));
    }
    write_csv(options.out_dir / "fuel_deviations.csv", config,
              counterfactual::deviation_csv(fuel_ptrs));
    write_json(options.out_dir / "fuel_split.json", config, {{"fuels", fuels.to_json()}});
    for (const auto& r : fuels.results) {
      log << "fuel split: " << r.report.target << " average deviation "
          << fixed(r.report.average_percent_deviation, 2) << "%\n";
    }
  }
}

void cmd_market(const Config& config, const Options& options, std::ostream& log) {
  const json& sec = section(config, "market");
  market::MarketParams params;
  if (auto r = optional_range(sec, "window", "market")) params.window = *r;
  params.monthly_rate = sec.value("monthly_wacc", market::kMonthlyWacc);

  std::vector<market::ZoneSource> zones;
  if (!sec.contains("zones") || !sec.at("zones").is_array()) {
    throw SchemaError("market.zones must be an array");
  }
  for (const auto& z : sec.at("zones")) {
    market::ZoneSource src;
    src.zone = string_field(z, "zone", "market.zones");
    src.region = market::region_from_string(string_field(z, "region", "market.zones"));
    src.hourly_prices = config.path(z, "hourly_prices");
    zones.push_back(std::move(src));
  }
  const auto inputs =
      market::load_market_inputs(config.path(sec, "units"), zones, config.path(sec, "forecasts"),
                                 config.path(sec, "capacity_prices"), params.window);

  auto cf_def = market::ScenarioDefinition::counterfactual();
  auto cur_def = market::ScenarioDefinition::current_expectations();
  if (sec.contains("scenarios")) {
    // {"current_expectations": {"vintage": "...", "actual": {"start":..,"end":..} | null}}
    auto apply = [&](const char* key, market::ScenarioDefinition& def) {
      if (!sec.at("scenarios").contains(key)) return;
      const json& s = sec.at("scenarios").at(key);
      def.vintage = s.value("vintage", def.vintage);
      if (s.contains("actual")) {
        def.actual_months = s.at("actual").is_null()
                                ? std::nullopt
                                : std::optional(month_range(s.at("actual"), key));
      }
    };
    apply("counterfactual", cf_def);
    apply("current_expectations", cur_def);
  }
  const auto run = market::run_market(inputs, params, cf_def, cur_def);

  write_csv(options.out_dir / "ledgers.csv", config,
            market::ledger_csv(run.counterfactual_ledgers, run.current_ledgers, params));
  write_csv(options.out_dir / "unit_summary.csv", config, market::unit_summary_csv(run));
  write_csv(options.out_dir / "fleet_monthly.csv", config, market::fleet_monthly_csv(run.report));
  write_json(options.out_dir / "at_risk.json", config,
             {{"window", {{"start", params.window.first.str()}, {"end", params.window.last.str()}}},
              {"monthly_wacc", params.monthly_rate},
              {"report", run.report.to_json()}});
  log << "market: " << run.fleet.size() << " units, " << run.report.at_risk_units.size()
      << " at risk (" << fixed(run.report.at_risk_mw, 1) << " MW, "
      << fixed(100.0 * run.report.share_of_fleet_mw, 2) << "% of fleet MW); PV delta $"
      << fixed(run.report.pv_delta, 0) << "\n";
}

void cmd_report(const Config& config, const Options& options, std::ostream& out) {
  std::ostringstream md;
  bool any = false;
  auto load = [&](const char* name) -> std::optional<json> {
    const fs::path p = options.out_dir / name;
    if (!fs::exists(p)) return std::nullopt;
    try {
      return json::parse(read_bytes(p));
    } catch (const json::parse_error& e) {
      throw SchemaError(p.string() + ": invalid JSON: " + e.what());
    }
  };
  md << "# powercf report\n\nconfig_hash " << config.config_hash << ", seed " << config.seed
     << "\n";

  if (auto dev = load("deviations.json")) {
    any = true;
    md << "\n## Percent deviation of observed from counterfactual (95% CI half-width)\n\n";
    const auto& reports = dev->at("reports");
    md << "| month |";
    for (const auto& r : reports) md << ' ' << r.at("target").get<std::string>() << " |";
    md << "\n|---|";
    for (std::size_t i = 0; i < reports.size(); ++i) md << "---|";
    md << "\n";
    const std::size_t n = reports.empty() ? 0 : reports[0].at("months").size();
    for (std::size_t i = 0; i < n; ++i) {
      md << "| " << reports[0].at("months")[i].at("month").get<std::string>() << " |";
      for (const auto& r : reports) {
        const auto& m = r.at("months")[i];
        md << ' ' << fixed(m.at("percent_deviation").get<double>(), 1) << " ("
           << fixed(m.at("ci_halfwidth_pct").get<double>(), 1) << ")"
           << (m.at("significant").get<bool>() ? " *" : "") << " |";
      }
      md << "\n";
    }
    md << "| average |";
    for (const auto& r : reports) {
      md << ' ' << fixed(r.at("average_percent_deviation").get<double>(), 1) << " |";
    }
    md << "\n\n`*` observed value outside the 95% interval.\n";
  }
  if (auto fuels = load("fuel_split.json")) {
    any = true;
    md << "\n## Fuel split, window averages\n\n| fuel | counterfactual | observed | deviation % |\n"
          "|---|---|---|---|\n";
    for (const auto& f : fuels->at("fuels")) {
      md << "| " << f.at("target").get<std::string>() << " | "
         << fixed(f.at("counterfactual_average").get<double>(), 1) << " | "
         << fixed(f.at("observed_average").get<double>(), 1) << " | "
         << fixed(f.at("average_percent_deviation").get<double>(), 1) << " |\n";
    }
  }
  if (auto risk = load("at_risk.json")) {
    any = true;
    const auto& r = risk->at("report");
    md << "\n## Coal units at risk\n\n"
       << "- units: " << r.at("count").get<std::size_t>() << " ("
       << string_list(r.at("at_risk_units"), "at_risk_units").size() << " listed)\n"
       << "- capacity: " << fixed(r.at("at_risk_mw").get<double>(), 1) << " MW of "
       << fixed(r.at("fleet_mw").get<double>(), 1) << " MW ("
       << fixed(100.0 * r.at("share_of_fleet_mw").get<double>(), 2) << "%)\n"
       << "- mean age: " << fixed(r.at("mean_age_years").get<double>(), 1) << " years\n"
       << "- PV profit, counterfactual: $" << fixed(r.at("pv_counterfactual").get<double>(), 0)
       << "\n- PV profit, current expectations: $" << fixed(r.at("pv_current").get<double>(), 0)
       << "\n- PV difference: $" << fixed(r.at("pv_delta").get<double>(), 0) << "\n";
    for (const auto& id : r.at("at_risk_units")) md << "  - " << id.get<std::string>() << "\n";
  }
  if (!any) {
    throw CoverageError("no outputs in " + options.out_dir.string() +
                        "; run counterfactual and/or market first");
  }
  write_text(options.out_dir / "report.md", md.str());
  out << md.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counterfactual emissions and coal-fleet profitability analysis"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::vector<std::string> targets;
  app.add_option("--config", config_path, "JSON config file")->required();
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--targets", targets, "comma-separated series labels")->delimiter(',');

  auto* ingest = app.add_subcommand("ingest", "plant-level data to the monthly series file");
  auto* cf = app.add_subcommand("counterfactual", "fit, forecast and test each target");
  auto* market = app.add_subcommand("market", "coal-unit cash flows under both price scenarios");
  auto* report = app.add_subcommand("report", "summary tables from existing outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : int(ExitCode::kInput);
  }

  try {
    const Config config = Config::load(config_path, seed);
    Options options;
    options.out_dir = out_dir;
    options.targets = targets;
    if (ingest->parsed()) cmd_ingest(config, options, out);
    if (cf->parsed()) cmd_counterfactual(config, options, out);
    if (market->parsed()) cmd_market(config, options, out);
    if (report->parsed()) cmd_report(config, options, out);
    return int(ExitCode::kOk);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return int(e.exit_code());
  } catch (const nlohmann::json::exception& e) {
    err << "error: config: " << e.what() << "\n";
    return int(ExitCode::kInput);
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return int(ExitCode::kInput);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace powercf::cli
