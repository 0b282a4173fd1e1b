#include "powercf/counterfactual.hpp"

#include <cmath>
#include <exception>
#include <optional>

#include "powercf/errors.hpp"

namespace powercf::counterfactual {

void ExperimentSpec::validate() const {
  if (train.size() <= 0 || forecast.size() <= 0) throw SchemaError("empty experiment window");
  if (!(train.last < forecast.first)) {
    throw SchemaError("training window must end before the forecast window starts (" +
                      train.last.str() + " >= " + forecast.first.str() + ")");
  }
}

int DeviationReport::significant_count() const {
  int n = 0;
  for (const auto& m : months) n += m.significant ? 1 : 0;
  return n;
}

nlohmann::ordered_json DeviationReport::to_json() const {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& m : months) {
    rows.push_back({{"month", m.month.str()},
                    {"observed", m.observed},
                    {"mean", m.mean},
                    {"variance", m.variance},
                    {"percent_deviation", m.percent_deviation},
                    {"ci_halfwidth_pct", m.ci_halfwidth_pct},
                    {"z", m.z},
                    {"significant", m.significant}});
  }
  return {{"target", target},
          {"months", std::move(rows)},
          {"average_percent_deviation", average_percent_deviation},
          {"average_observed", average_observed},
          {"average_counterfactual", average_counterfactual},
          {"significant_count", significant_count()}};
}

Eigen::MatrixXd design_matrix(const SeriesBundle& bundle, const ExperimentSpec& spec,
                              const MonthRange& range) {
  Eigen::MatrixXd X(range.size(), Eigen::Index(1 + spec.covariates.size()));
  for (int i = 0; i < range.size(); ++i) X(i, 0) = double(range.first + i - spec.train.first);
  for (std::size_t c = 0; c < spec.covariates.size(); ++c) {
    const auto values = bundle.get(spec.covariates[c]).slice(range);
    for (int i = 0; i < range.size(); ++i) X(i, Eigen::Index(c) + 1) = values[std::size_t(i)];
  }
  return X;
}

std::vector<bool> significance_verdict(const gp::PredictiveDistribution& dist,
                                       const std::vector<double>& observed) {
  if (Eigen::Index(observed.size()) != dist.mean.size()) {
    throw SchemaError("observed has " + std::to_string(observed.size()) +
                      " values, distribution has " + std::to_string(dist.mean.size()));
  }
  std::vector<bool> out(observed.size());
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const auto k = Eigen::Index(i);
    out[i] = observed[i] < dist.ci95_lower(k) || observed[i] > dist.ci95_upper(k);
  }
  return out;
}

DeviationReport make_report(const std::string& target, const gp::PredictiveDistribution& dist,
                            const std::vector<double>& observed) {
  const auto verdict = significance_verdict(dist, observed);
  DeviationReport report;
  report.target = target;
  double sum_dev = 0.0, sum_obs = 0.0, sum_mean = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const auto k = Eigen::Index(i);
    MonthDeviation d;
    if (i < dist.months.size()) d.month = dist.months[i];
    d.observed = observed[i];
    d.mean = dist.mean(k);
    d.variance = dist.variance(k);
    const double sd = std::sqrt(d.variance);
    d.percent_deviation = 100.0 * (d.observed - d.mean) / d.mean;
    d.ci_halfwidth_pct = 100.0 * gp::PredictiveDistribution::kZ95 * sd / d.mean;
    d.z = (d.observed - d.mean) / sd;
    d.significant = verdict[i];
    sum_dev += d.percent_deviation;
    sum_obs += d.observed;
    sum_mean += d.mean;
    report.months.push_back(d);
  }
  const double n = double(observed.size());
  report.average_percent_deviation = sum_dev / n;
  report.average_observed = sum_obs / n;
  report.average_counterfactual = sum_mean / n;
  return report;
}

ExperimentResult run_experiment(const SeriesBundle& bundle, const ExperimentSpec& spec) {
  spec.validate();
  const MonthlySeries& target = bundle.get(spec.target);
  const auto y_train = target.slice(spec.train);
  const auto y_obs = target.slice(spec.forecast);

  const Eigen::MatrixXd X_train = design_matrix(bundle, spec, spec.train);
  const Eigen::MatrixXd X_fore = design_matrix(bundle, spec, spec.forecast);
  const Eigen::VectorXd y =
      Eigen::Map<const Eigen::VectorXd>(y_train.data(), Eigen::Index(y_train.size()));

  gp::FitConfig config = spec.fit;
  if (config.input_scaling.empty()) {
    config.input_scaling.assign(1 + spec.covariates.size(), gp::ColumnScaling::kDivideByMean);
    config.input_scaling[0] = gp::ColumnScaling::kNone;
  }
  std::vector<int> weather_dims;
  for (std::size_t c = 0; c < spec.covariates.size(); ++c) weather_dims.push_back(int(c) + 1);

  gp::GpModel model = [&] {
    try {
      return gp::fit(X_train, y, gp::KernelSpec::time_weather(0, weather_dims), config);
    } catch (const DegenerateTargetError& e) {
      throw DegenerateTargetError("target " + spec.target + ": " + e.what());
    }
  }();

  gp::PredictiveDistribution forecast = model.predict(X_fore);
  for (int i = 0; i < spec.forecast.size(); ++i) forecast.months.push_back(spec.forecast.first + i);
  gp::PredictiveDistribution history = model.predict(X_train);
  for (int i = 0; i < spec.train.size(); ++i) history.months.push_back(spec.train.first + i);

  DeviationReport report = make_report(spec.target, forecast, y_obs);
  return {std::move(model), std::move(forecast), std::move(history), y_train, std::move(report)};
}

std::vector<ExperimentResult> run_experiments(const SeriesBundle& bundle,
                                              const std::vector<ExperimentSpec>& specs) {
  std::vector<std::optional<ExperimentResult>> slots(specs.size());
  std::vector<std::exception_ptr> errors(specs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < specs.size(); ++i) {
    try {
      slots[i].emplace(run_experiment(bundle, specs[i]));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  std::vector<ExperimentResult> out;
  out.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

nlohmann::ordered_json FuelSplitResult::to_json() const {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < fuels.size(); ++i) {
    const auto& r = results[i].report;
    out.push_back({{"target", fuels[i]},
                   {"counterfactual_average", r.average_counterfactual},
                   {"observed_average", r.average_observed},
                   {"average_percent_deviation", r.average_percent_deviation},
                   {"significant_count", r.significant_count()}});
  }
  return out;
}

FuelSplitResult fuel_split_experiment(const SeriesBundle& bundle, const ExperimentSpec& spec) {
  FuelSplitResult out;
  out.fuels = {label::kCCoal, label::kCGas, label::kCOil};
  std::vector<ExperimentSpec> specs;
  for (const auto& fuel : out.fuels) {
    ExperimentSpec s = spec;
    s.target = fuel;
    specs.push_back(std::move(s));
  }
  out.results = run_experiments(bundle, specs);
  return out;
}

}  // namespace powercf::counterfactual
