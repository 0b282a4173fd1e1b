#include <doctest.h>

#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include <json.hpp>

#include "cli.hpp"
#include "powercf/calendar.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "powercf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = powercf::cli::run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("powercf_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

const std::string kGolden = std::string(POWERCF_FIXTURE_DIR) + "/golden.json";

/// Golden config copied next to custom inputs, paths made absolute.
fs::path write_config(const fs::path& dir, const std::function<void(json&)>& edit) {
  json doc = json::parse(slurp(kGolden));
  const fs::path base = fs::path(POWERCF_FIXTURE_DIR);
  for (auto* sec : {&doc["ingest"], &doc["market"]}) {
    for (auto& [k, v] : sec->items()) {
      if (v.is_string()) v = (base / v.get<std::string>()).string();
    }
  }
  for (auto& z : doc["market"]["zones"]) {
    z["hourly_prices"] = (base / z["hourly_prices"].get<std::string>()).string();
  }
  edit(doc);
  const fs::path p = dir / "config.json";
  spit(p, doc.dump(2));
  return p;
}

}  // namespace

TEST_CASE("ingest writes a stamped series file, byte-identical on rerun") {
  TempDir tmp;
  const auto a = run_cli({"ingest", "--config", kGolden, "--out", (tmp.path / "a").string()});
  REQUIRE(a.code == 0);
  const auto b = run_cli({"ingest", "--config", kGolden, "--out", (tmp.path / "b").string()});
  REQUIRE(b.code == 0);
  const std::string series = slurp(tmp.path / "a" / "series.json");
  CHECK(series == slurp(tmp.path / "b" / "series.json"));
  const json doc = json::parse(series);
  CHECK(doc.at("seed") == 20200301);
  CHECK(doc.at("config_hash").get<std::string>().size() == 16);
  CHECK(doc.at("series").size() == 8);
}

TEST_CASE("missing column exits 2 and names the column") {
  TempDir tmp;
  spit(tmp.path / "gen.csv", "plant_id,state,year,month,fuel_code,generation_mwh\nA,PA,2019,1,NG,1\n");
  const auto cfg = write_config(tmp.path, [&](json& d) {
    d["ingest"]["generation"] = (tmp.path / "gen.csv").string();
  });
  const auto r = run_cli({"ingest", "--config", cfg.string(), "--out", (tmp.path / "out").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("fuel_consumed_mmbtu") != std::string::npos);
}

TEST_CASE("bad numeric cell exits 2 with file and line") {
  TempDir tmp;
  spit(tmp.path / "gen.csv",
       "plant_id,state,year,month,fuel_code,generation_mwh,fuel_consumed_mmbtu\n"
       "A,PA,2019,1,NG,1,2\nA,PA,2019,2,NG,x,2\n");
  const auto cfg = write_config(tmp.path, [&](json& d) {
    d["ingest"]["generation"] = (tmp.path / "gen.csv").string();
  });
  const auto r = run_cli({"ingest", "--config", cfg.string(), "--out", (tmp.path / "out").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("gen.csv:3") != std::string::npos);
}

TEST_CASE("coverage gap exits 4") {
  TempDir tmp;
  const auto cfg = write_config(tmp.path, [&](json& d) {
    d["ingest"]["window"] = {{"start", "2016-01"}, {"end", "2021-06"}};
  });
  const auto r = run_cli({"ingest", "--config", cfg.string(), "--out", (tmp.path / "out").string()});
  CHECK(r.code == 4);
}

TEST_CASE("counterfactual: stamped outputs, seed override, missing label") {
  TempDir tmp;
  const auto out = (tmp.path / "out").string();
  REQUIRE(run_cli({"ingest", "--config", kGolden, "--out", out}).code == 0);
  const auto r = run_cli({"counterfactual", "--config", kGolden, "--out", out, "--targets", "C,E",
                          "--seed", "7"});
  REQUIRE(r.code == 0);
  const json dev = json::parse(slurp(tmp.path / "out" / "deviations.json"));
  CHECK(dev.at("seed") == 7);
  CHECK(dev.at("reports").size() == 2);
  for (const char* f : {"deviations.csv", "plot_C.csv", "plot_E.csv", "fuel_split.csv"}) {
    const std::string text = slurp(tmp.path / "out" / f);
    CHECK(text.rfind("# config_hash=", 0) == 0);
    CHECK(text.find("seed=7") != std::string::npos);
  }
  const auto bad = run_cli({"counterfactual", "--config", kGolden, "--out", out, "--targets", "NOPE"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("NOPE") != std::string::npos);
}

TEST_CASE("counterfactual without a series file exits 4") {
  TempDir tmp;
  const auto r = run_cli({"counterfactual", "--config", kGolden, "--out", (tmp.path / "none").string()});
  CHECK(r.code == 4);
}

TEST_CASE("constant target exits 3") {
  TempDir tmp;
  json series = {{"format", "powercf.series/1"}, {"config_hash", ""}, {"seed", 0}};
  json s = json::object();
  for (const char* name : {"C", "HDD", "CDD"}) {
    std::vector<double> v(60);
    std::vector<std::string> months(60);
    for (int i = 0; i < 60; ++i) {
      v[std::size_t(i)] = std::string(name) == "C" ? 5.0 : 100.0 + i % 12;
      months[std::size_t(i)] = (powercf::YearMonth{2016, 1} + i).str();
    }
    s[name] = {{"units", ""}, {"months", months}, {"values", v}};
  }
  series["series"] = s;
  series["validation"] = json::object();
  spit(tmp.path / "series.json", series.dump());
  const auto cfg = write_config(tmp.path, [&](json& d) {
    d["counterfactual"]["series"] = (tmp.path / "series.json").string();
  });
  const auto r = run_cli({"counterfactual", "--config", cfg.string(), "--out", (tmp.path / "out").string(),
                          "--targets", "C"});
  INFO(r.err);
  CHECK(r.code == 3);
}

TEST_CASE("market: engineered unit is the only one at risk; identical scenarios give none") {
  TempDir tmp;
  const auto r = run_cli({"market", "--config", kGolden, "--out", (tmp.path / "a").string()});
  REQUIRE(r.code == 0);
  const json risk = json::parse(slurp(tmp.path / "a" / "at_risk.json"));
  CHECK(risk.at("report").at("at_risk_units") == json::array({"H3"}));
  CHECK(slurp(tmp.path / "a" / "ledgers.csv").rfind("# config_hash=", 0) == 0);

  const auto cfg = write_config(tmp.path, [](json& d) {
    d["market"]["scenarios"] = {{"current_expectations", {{"vintage", "2020-01"}, {"actual", nullptr}}}};
  });
  REQUIRE(run_cli({"market", "--config", cfg.string(), "--out", (tmp.path / "b").string()}).code == 0);
  const json same = json::parse(slurp(tmp.path / "b" / "at_risk.json"));
  CHECK(same.at("report").at("at_risk_units").empty());
  CHECK(same.at("report").at("pv_delta") == 0.0);
}

TEST_CASE("report summarises existing outputs, and needs some") {
  TempDir tmp;
  const auto out = (tmp.path / "out").string();
  CHECK(run_cli({"report", "--config", kGolden, "--out", out}).code == 4);
  REQUIRE(run_cli({"market", "--config", kGolden, "--out", out}).code == 0);
  const auto r = run_cli({"report", "--config", kGolden, "--out", out});
  CHECK(r.code == 0);
  CHECK(r.out.find("H3") != std::string::npos);
  CHECK(fs::exists(tmp.path / "out" / "report.md"));
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli({"ingest"}).code == 2);
  CHECK(run_cli({"--config", kGolden}).code == 2);
  CHECK(run_cli({"frobnicate", "--config", kGolden}).code == 2);
  CHECK(run_cli({"ingest", "--config", "/nonexistent/config.json"}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);
}
