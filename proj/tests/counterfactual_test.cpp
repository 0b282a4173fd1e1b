#include <doctest.h>

#include <cmath>
#include <random>

#include "powercf/counterfactual.hpp"
#include "powercf/errors.hpp"
#include "support/calibration.hpp"

using namespace powercf;
using namespace powercf::counterfactual;

namespace {

gp::PredictiveDistribution make_dist(std::vector<double> mean, std::vector<double> variance) {
  gp::PredictiveDistribution d;
  const auto n = Eigen::Index(mean.size());
  d.mean = Eigen::Map<Eigen::VectorXd>(mean.data(), n);
  d.variance = Eigen::Map<Eigen::VectorXd>(variance.data(), n);
  d.latent_variance = d.variance;
  const Eigen::VectorXd half = 1.96 * d.variance.array().sqrt().matrix();
  d.ci95_lower = d.mean - half;
  d.ci95_upper = d.mean + half;
  return d;
}

SeriesBundle seasonal_bundle(std::uint64_t seed) {
  return testing_support::simulate_bundle(seed, 60, testing_support::calibration_kernel(), 0.05);
}

ExperimentSpec short_spec() {
  ExperimentSpec spec;
  spec.train = {{2016, 1}, {2019, 12}};
  spec.forecast = {{2020, 1}, {2020, 12}};
  return spec;
}

}  // namespace

TEST_SUITE("significance_verdict") {
  TEST_CASE("boundary examples") {
    const auto d = make_dist({100.0, 100.0, 100.0, 100.0}, {4.0, 4.0, 4.0, 4.0});
    const auto v = significance_verdict(d, {100.0, 104.0, 103.9, 96.0});
    CHECK_FALSE(v[0]);  // at the mean
    CHECK(v[1]);        // +2 sigma
    CHECK_FALSE(v[2]);  // +1.95 sigma
    CHECK(v[3]);        // -2 sigma
  }

  TEST_CASE("length mismatch is rejected") {
    CHECK_THROWS_AS(significance_verdict(make_dist({1.0}, {1.0}), {1.0, 2.0}), SchemaError);
  }

  TEST_CASE("verdict agrees with |z| > 1.96 and with the percent form (property)") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> mean(10.0, 1000.0), sd_frac(0.001, 0.2), z(-4.0, 4.0);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> m(12), v(12), obs(12);
      for (int i = 0; i < 12; ++i) {
        m[i] = mean(rng);
        const double sd = sd_frac(rng) * m[i];
        v[i] = sd * sd;
        obs[i] = m[i] + z(rng) * sd;
      }
      const auto report = make_report("C", make_dist(m, v), obs);
      double sum = 0.0;
      for (const auto& d : report.months) {
        CHECK(d.significant == (std::abs(d.z) > 1.96));
        CHECK(d.significant == (std::abs(d.percent_deviation) > d.ci_halfwidth_pct));
        sum += d.percent_deviation;
      }
      CHECK(std::abs(report.average_percent_deviation - sum / 12.0) <= 1e-12 * std::max(1.0, std::abs(sum)));
    }
  }

  TEST_CASE("report fields follow their definitions") {
    const auto r = make_report("E", make_dist({200.0}, {25.0}), {180.0});
    REQUIRE(r.months.size() == 1);
    CHECK(r.months[0].percent_deviation == doctest::Approx(-10.0));
    CHECK(r.months[0].ci_halfwidth_pct == doctest::Approx(100.0 * 1.96 * 5.0 / 200.0));
    CHECK(r.months[0].z == doctest::Approx(-4.0));
    CHECK(r.months[0].significant);
    CHECK(r.average_observed == 180.0);
    CHECK(r.average_counterfactual == 200.0);
  }
}

TEST_SUITE("run_experiment") {
  TEST_CASE("spec validation") {
    ExperimentSpec spec;
    CHECK_NOTHROW(spec.validate());
    spec.forecast = {{2020, 2}, {2020, 12}};
    CHECK_THROWS_AS(spec.validate(), SchemaError);
  }

  TEST_CASE("rerunning gives identical reports") {
    const auto bundle = seasonal_bundle(4);
    const auto a = run_experiment(bundle, short_spec());
    const auto b = run_experiment(bundle, short_spec());
    CHECK(a.report.to_json().dump() == b.report.to_json().dump());
    CHECK(a.report.months.size() == 12);
    CHECK(a.history.mean.size() == 48);
  }

  TEST_CASE("observed equal to the forecast mean is never significant") {
    const auto bundle = seasonal_bundle(6);
    const auto result = run_experiment(bundle, short_spec());
    std::vector<double> at_mean(result.forecast.mean.data(),
                                result.forecast.mean.data() + result.forecast.mean.size());
    const auto report = make_report("C", result.forecast, at_mean);
    CHECK(report.significant_count() == 0);
    CHECK(report.average_percent_deviation == 0.0);
  }

  TEST_CASE("a large level shift in the forecast window is flagged") {
    auto bundle = seasonal_bundle(12);
    auto& c = bundle.series.at(label::kC).values;
    for (int i = 48; i < 60; ++i) c[std::size_t(i)] *= 0.7;
    const auto result = run_experiment(bundle, short_spec());
    CHECK(result.report.significant_count() >= 10);
    CHECK(result.report.average_percent_deviation < -20.0);
  }

  TEST_CASE("all-zero target is refused as degenerate") {
    auto bundle = seasonal_bundle(1);
    bundle.series[label::kCOil] = MonthlySeries{label::kCOil, "", {2016, 1}, std::vector<double>(60, 0.0)};
    ExperimentSpec spec = short_spec();
    spec.target = label::kCOil;
    try {
      run_experiment(bundle, spec);
      FAIL("expected DegenerateTargetError");
    } catch (const DegenerateTargetError& e) {
      CHECK(std::string(e.what()).find("C_oil") != std::string::npos);
      CHECK(e.exit_code() == ExitCode::kNumerical);
    }
  }

  TEST_CASE("series not covering the windows is a coverage error") {
    const auto bundle = seasonal_bundle(2);
    ExperimentSpec spec = short_spec();
    spec.forecast = {{2020, 1}, {2021, 3}};
    CHECK_THROWS_AS(run_experiment(bundle, spec), CoverageError);
  }

  TEST_CASE("parallel batch keeps order and matches single runs") {
    const auto bundle = seasonal_bundle(3);
    ExperimentSpec a = short_spec(), b = short_spec();
    b.fit.seed = 99;
    b.covariates = {label::kHdd};
    const auto both = run_experiments(bundle, {a, b});
    REQUIRE(both.size() == 2);
    CHECK(both[0].report.to_json() == run_experiment(bundle, a).report.to_json());
    CHECK(both[1].report.to_json() == run_experiment(bundle, b).report.to_json());
  }
}

TEST_SUITE("calibration") {
  TEST_CASE("false-positive rate under no intervention stays within [0.5%, 15%]") {
    const auto outcome = testing_support::run_calibration(50, 500);
    MESSAGE("significant " << outcome.significant << " of " << outcome.months << " months");
    CHECK(outcome.months >= 500);
    CHECK(outcome.rate() >= 0.005);
    CHECK(outcome.rate() <= 0.15);
  }
}
