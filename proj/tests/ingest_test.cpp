#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "powercf/csv.hpp"
#include "powercf/errors.hpp"
#include "powercf/ingest.hpp"

using namespace powercf;
using namespace powercf::ingest;

namespace {

const char* kHeader =
    "plant_id,state,year,month,fuel_code,generation_mwh,fuel_consumed_mmbtu\n";

const char* kFactors =
    "fuel_code,kg_co2_per_mmbtu,category\n"
    "BIT,93.3,coal\n"
    "SUB,97.17,coal\n"
    "NG,53.06,gas\n"
    "DFO,73.96,oil\n"
    "RFO,75.1,oil\n";

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// 24 months, four plants across fuels, random-ish but deterministic values.
std::string synthetic_generation(std::uint64_t seed, YearMonth start, int months,
                                 bool gas_only = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> gen(1e4, 5e5), rate(6.5, 11.0);
  std::ostringstream out;
  out.precision(17);
  out << kHeader;
  const char* fuels[] = {"BIT", "NG", "DFO", "NUC", "SUB", "WND"};
  const char* states[] = {"PA", "TX", "NY", "IL", "WY", "IA"};
  for (int k = 0; k < months; ++k) {
    const YearMonth m = start + k;
    for (int p = 0; p < 6; ++p) {
      const std::string fuel = gas_only ? "NG" : fuels[p];
      const double g = gen(rng);
      const bool burns = fuel != "NUC" && fuel != "WND";
      out << "P" << p << "," << states[p] << "," << m.year << "," << m.month << "," << fuel << ","
          << g << "," << (burns ? g * rate(rng) : 0.0) << "\n";
    }
  }
  return out.str();
}

std::map<YearMonth, DegreeDays> flat_degree_days(YearMonth start, int months) {
  std::map<YearMonth, DegreeDays> dd;
  for (int k = 0; k < months; ++k) dd[start + k] = {100.0 + k, 20.0 + k};
  return dd;
}

SeriesBundle run(std::string_view csv, const EmissionFactorTable& factors, MonthRange window) {
  const auto data = parse_generation(csv, {}, &factors);
  return aggregate_series(compute_emissions(data.records, factors), data.records,
                          flat_degree_days(window.first, window.size()), window);
}

}  // namespace

TEST_SUITE("load_generation") {
  TEST_CASE("header-only file gives no records and no warnings") {
    const auto data = parse_generation(kHeader);
    CHECK(data.records.empty());
    CHECK(data.report.warning_count() == 0);
  }

  TEST_CASE("unknown fuel code is kept and reported once") {
    const std::string csv = std::string(kHeader) +
                            "A,PA,2019,1,NG,10,80\n"
                            "B,PA,2019,1,XYZ,5,1\n"
                            "C,OH,2019,1,BIT,7,70\n";
    const auto data = parse_generation(csv);
    CHECK(data.records.size() == 3);
    CHECK(data.report.warning_count() == 1);
    CHECK(data.report.unknown_fuel_codes.at("XYZ") == 1);
  }

  TEST_CASE("missing column is named in the error") {
    const std::string csv = "plant_id,state,year,month,fuel_code,generation_mwh\nA,PA,2019,1,NG,1\n";
    try {
      parse_generation(csv);
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(std::string(e.what()).find("fuel_consumed_mmbtu") != std::string::npos);
      CHECK(e.exit_code() == ExitCode::kInput);
    }
  }

  TEST_CASE("unparseable number reports the line") {
    const std::string csv = std::string(kHeader) + "A,PA,2019,1,NG,10,80\nB,PA,2019,1,NG,abc,1\n";
    try {
      parse_generation(csv);
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      const std::string what = e.what();
      CHECK(what.find(":3:") != std::string::npos);
      CHECK(what.find("generation_mwh") != std::string::npos);
    }
  }

  TEST_CASE("non-contiguous states and out-of-window rows are filtered and counted") {
    const std::string csv = std::string(kHeader) +
                            "A,AK,2019,1,NG,10,80\n"
                            "B,HI,2019,1,NG,10,80\n"
                            "C,DC,2019,1,NG,10,80\n"
                            "D,PA,2015,12,NG,10,80\n";
    LoadOptions opts;
    opts.window = MonthRange{{2016, 1}, {2020, 12}};
    const auto data = parse_generation(csv, opts);
    CHECK(data.records.size() == 1);
    CHECK(data.records[0].plant_id == "C");
    CHECK(data.report.rows_outside_states == 2);
    CHECK(data.report.rows_outside_window == 1);
  }

  TEST_CASE("column map adapts renamed headers") {
    const std::string csv =
        "Plant Id,Plant State,YEAR,MONTH,Reported Fuel Type Code,Net Generation (Megawatthours),"
        "Elec Fuel Consumption MMBtu\n"
        "1,PA,2019,3,NG,10,80\n";
    LoadOptions opts;
    opts.column_map = {{"plant_id", "Plant Id"},
                       {"state", "Plant State"},
                       {"year", "YEAR"},
                       {"month", "MONTH"},
                       {"fuel_code", "Reported Fuel Type Code"},
                       {"generation_mwh", "Net Generation (Megawatthours)"},
                       {"fuel_consumed_mmbtu", "Elec Fuel Consumption MMBtu"}};
    const auto data = parse_generation(csv, opts);
    REQUIRE(data.records.size() == 1);
    CHECK(data.records[0].month == YearMonth{2019, 3});
    CHECK(data.records[0].fuel_consumed_mmbtu == 80.0);
  }
}

TEST_SUITE("compute_emissions") {
  const auto factors = EmissionFactorTable::parse(
      "fuel_code,kg_co2_per_mmbtu,category\nXF,95.0,coal\nNG,53.06,gas\n");

  TEST_CASE("500,000 MMBtu at 95 kg/MMBtu is 47,500 t") {
    const std::string csv = std::string(kHeader) + "A,PA,2019,1,XF,100000,500000\n";
    const auto data = parse_generation(csv, {}, &factors);
    const auto em = compute_emissions(data.records, factors);
    REQUIRE(em.size() == 1);
    CHECK(em[0].emissions_kg / 1000.0 == doctest::Approx(47500.0).epsilon(1e-15));
  }

  TEST_CASE("zero fuel consumption gives zero emissions") {
    const auto data = parse_generation(std::string(kHeader) + "A,PA,2019,1,NG,10,0\n", {}, &factors);
    CHECK(compute_emissions(data.records, factors)[0].emissions_kg == 0.0);
  }

  TEST_CASE("linearity across plants burning the same fuel") {
    const double a = 1234.5, b = 98765.25;
    std::ostringstream csv;
    csv.precision(17);
    csv << kHeader << "A,PA,2019,1,NG,10," << a << "\nB,OH,2019,1,NG,10," << b << "\n";
    const auto data = parse_generation(csv.str(), {}, &factors);
    double total = 0.0;
    for (const auto& e : compute_emissions(data.records, factors)) total += e.emissions_kg;
    CHECK(rel(total, (a + b) * 53.06) < 1e-14);
  }

  TEST_CASE("fossil code without a factor is a hard error") {
    const auto data = parse_generation(std::string(kHeader) + "A,PA,2019,1,BIT,10,100\n");
    CHECK_THROWS_AS(compute_emissions(data.records, factors), SchemaError);
  }

  TEST_CASE("non-fossil and unknown codes emit nothing") {
    const auto data =
        parse_generation(std::string(kHeader) + "A,PA,2019,1,NUC,10,100\nB,PA,2019,1,XYZ,1,5\n");
    for (const auto& e : compute_emissions(data.records, factors)) CHECK(e.emissions_kg == 0.0);
  }

  TEST_CASE("negative factors are rejected") {
    CHECK_THROWS_AS(EmissionFactorTable::parse("fuel_code,kg_co2_per_mmbtu\nNG,-1\n"), SchemaError);
  }
}

TEST_SUITE("aggregate_series") {
  TEST_CASE("five-plant fixture matches the spreadsheet sums") {
    const std::string dir = POWERCF_TEST_DATA_DIR;
    const auto factors = EmissionFactorTable::load(dir + "/five_plants_factors.csv");
    const auto data = load_generation(dir + "/five_plants_generation.csv", {}, &factors);
    const MonthRange window{{2019, 1}, {2019, 12}};
    const auto bundle = aggregate_series(compute_emissions(data.records, factors), data.records,
                                         flat_degree_days(window.first, 12), window);
    const auto expected = CsvTable::read(dir + "/five_plants_expected.csv");
    REQUIRE(expected.rows().size() == 12);
    for (const auto& row : expected.rows()) {
      const YearMonth m{int(expected.integer(row, "year")), int(expected.integer(row, "month"))};
      CHECK(rel(bundle.get(label::kC).at(m), expected.number(row, "c_mmt_annualized")) < 1e-12);
      CHECK(rel(bundle.get(label::kE).at(m), expected.number(row, "e_twh_annualized")) < 1e-12);
      CHECK(rel(bundle.get(label::kCOverE).at(m), expected.number(row, "c_over_e_kg_per_mwh")) <
            1e-12);
    }
  }

  TEST_CASE("single month annualization uses 365 / days in month") {
    // 100 MMT of CO2 in February 2019 (28 days).
    const auto factors = EmissionFactorTable::parse("fuel_code,kg_co2_per_mmbtu\nNG,100\n");
    const std::string csv = std::string(kHeader) + "A,PA,2019,2,NG,1000,1e9\n";
    const MonthRange window{{2019, 2}, {2019, 2}};
    const auto bundle = run(csv, factors, window);
    CHECK(bundle.get(label::kC).values[0] == doctest::Approx(100.0 * 365.0 / 28.0).epsilon(1e-14));
  }

  TEST_CASE("all-gas fleet gives an all-zero coal series") {
    const auto factors = EmissionFactorTable::parse(kFactors);
    const MonthRange window{{2018, 1}, {2019, 12}};
    const auto bundle = run(synthetic_generation(3, window.first, 24, true), factors, window);
    for (double v : bundle.get(label::kCCoal).values) CHECK(v == 0.0);
    for (double v : bundle.get(label::kCOil).values) CHECK(v == 0.0);
  }

  TEST_CASE("24-month fixture: C/E equals C / E elementwise and fuel splits conserve C") {
    const auto factors = EmissionFactorTable::parse(kFactors);
    const MonthRange window{{2018, 1}, {2019, 12}};
    const auto bundle = run(synthetic_generation(9, window.first, 24), factors, window);
    const auto& c = bundle.get(label::kC).values;
    const auto& e = bundle.get(label::kE).values;
    const auto& ce = bundle.get(label::kCOverE).values;
    for (std::size_t i = 0; i < c.size(); ++i) {
      // MMT / TWh = 1e3 kg / MWh
      CHECK(rel(ce[i], 1e3 * c[i] / e[i]) < 1e-9);
      CHECK(rel(c[i], ce[i] * e[i] * 1e-3) < 1e-9);
      const double split = bundle.get(label::kCCoal).values[i] + bundle.get(label::kCGas).values[i] +
                           bundle.get(label::kCOil).values[i];
      CHECK(rel(split, c[i]) < 1e-9);
    }
  }

  TEST_CASE("aggregation is invariant to row order (property, 50 shuffles)") {
    const auto factors = EmissionFactorTable::parse(kFactors);
    const MonthRange window{{2018, 1}, {2019, 12}};
    const std::string csv = synthetic_generation(21, window.first, 24);
    const std::string reference = run(csv, factors, window).dump();

    std::vector<std::string> lines;
    std::istringstream in(csv);
    std::string line, header;
    std::getline(in, header);
    while (std::getline(in, line)) lines.push_back(line);
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 50; ++trial) {
      std::shuffle(lines.begin(), lines.end(), rng);
      std::string shuffled = header + "\n";
      for (const auto& l : lines) shuffled += l + "\n";
      CHECK(run(shuffled, factors, window).dump() == reference);
    }
  }

  TEST_CASE("re-running gives byte-identical serialized output") {
    const auto factors = EmissionFactorTable::parse(kFactors);
    const MonthRange window{{2018, 1}, {2019, 12}};
    const std::string csv = synthetic_generation(5, window.first, 24);
    const auto a = run(csv, factors, window).dump();
    CHECK(a == run(csv, factors, window).dump());
    CHECK(SeriesBundle::from_json(nlohmann::ordered_json::parse(a)).dump() == a);
  }

  TEST_CASE("a month gap is a coverage error") {
    const auto factors = EmissionFactorTable::parse(kFactors);
    const std::string csv = synthetic_generation(1, {2018, 1}, 3);
    std::string gapped;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
      if (line.find(",2018,2,") == std::string::npos) gapped += line + "\n";
    }
    const MonthRange window{{2018, 1}, {2018, 3}};
    const auto data = parse_generation(gapped, {}, &factors);
    CHECK_THROWS_AS(aggregate_series(compute_emissions(data.records, factors), data.records,
                                     flat_degree_days(window.first, 3), window),
                    CoverageError);
    std::map<YearMonth, DegreeDays> dd = flat_degree_days(window.first, 3);
    dd.erase(YearMonth{2018, 3});
    const auto full = parse_generation(csv, {}, &factors);
    CHECK_THROWS_AS(
        aggregate_series(compute_emissions(full.records, factors), full.records, dd, window),
        CoverageError);
  }

  TEST_CASE("annualize matches 365 / days") {
    CHECK(annualize(31.0, {2019, 1}) == 365.0);
    CHECK(annualize(28.0, {2019, 2}) == 365.0);
    CHECK(annualize(29.0, {2020, 2}) == 365.0);
    CHECK(annualize(30.0, {2020, 4}) == 365.0);
  }
}
