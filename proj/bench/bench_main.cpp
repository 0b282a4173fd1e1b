#include <benchmark/benchmark.h>

#include <random>

#include "powercf/gp/kernel.hpp"
#include "powercf/market/io.hpp"

namespace {

using namespace powercf;

Eigen::MatrixXd random_inputs(Eigen::Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd X(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = double(i);
    X(i, 1) = u(rng);
    X(i, 2) = u(rng);
  }
  return X;
}

template <auto Eval>
void bm_kernel(benchmark::State& state) {
  const auto spec = gp::KernelSpec::time_weather();
  const Eigen::MatrixXd X = random_inputs(state.range(0), 1);
  for (auto _ : state) {
    Eigen::MatrixXd K = Eval(spec, X, X);
    benchmark::DoNotOptimize(K.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

BENCHMARK(bm_kernel<gp::kernel_eval_serial>)->Name("kernel_eval_serial")->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(bm_kernel<gp::kernel_eval>)->Name("kernel_eval")->Arg(64)->Arg(256)->Arg(1024);

struct MarketFixture {
  market::MarketInputs inputs;
  market::MarketRun run;

  MarketFixture() {
    const std::string dir = std::string(POWERCF_FIXTURE_DIR) + "/market/";
    inputs = market::load_market_inputs(
        dir + "units.csv",
        {{"WEST", market::Region::kPjm, dir + "hourly_west.csv"},
         {"ZONE_A", market::Region::kNyiso, dir + "hourly_zone_a.csv"},
         {"HOUSTON", market::Region::kErcot, dir + "hourly_houston.csv"}},
        dir + "monthly_forecasts.csv", dir + "capacity_prices.csv");
    run = market::run_market(inputs);
  }

  std::vector<market::GenerationUnit> fleet(std::size_t copies) const {
    std::vector<market::GenerationUnit> out;
    for (std::size_t c = 0; c < copies; ++c) {
      for (auto u : run.fleet) {
        u.unit_id += "_" + std::to_string(c);
        out.push_back(u);
      }
    }
    return out;
  }
};

const MarketFixture& market_fixture() {
  static const MarketFixture f;
  return f;
}

template <auto Eval>
void bm_fleet(benchmark::State& state) {
  const auto& f = market_fixture();
  const auto fleet = f.fleet(std::size_t(state.range(0)));
  for (auto _ : state) {
    auto ledgers = Eval(fleet, f.run.current, market::MarketParams{});
    benchmark::DoNotOptimize(ledgers.data());
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(fleet.size()));
}

BENCHMARK(bm_fleet<market::fleet_profitability_serial>)
    ->Name("fleet_profitability_serial")->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_fleet<market::fleet_profitability>)
    ->Name("fleet_profitability")->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
