#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "powercf/gp/fit.hpp"
#include "powercf/gp/model.hpp"
#include "powercf/series.hpp"

namespace powercf::counterfactual {

struct ExperimentSpec {
  std::string target = label::kC;
  std::vector<std::string> covariates = {label::kHdd, label::kCdd};
  MonthRange train{{2016, 1}, {2020, 2}};
  MonthRange forecast{{2020, 3}, {2020, 12}};
  gp::FitConfig fit;

  /// Throws SchemaError unless train ends before the forecast starts.
  void validate() const;
};

struct MonthDeviation {
  YearMonth month;
  double observed = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double percent_deviation = 0.0;  // 100 (observed - mean) / mean
  double ci_halfwidth_pct = 0.0;   // 100 * 1.96 sqrt(variance) / mean
  double z = 0.0;
  bool significant = false;        // observed outside the 95% interval
};

struct DeviationReport {
  std::string target;
  std::vector<MonthDeviation> months;
  double average_percent_deviation = 0.0;
  double average_observed = 0.0;
  double average_counterfactual = 0.0;

  int significant_count() const;
  nlohmann::ordered_json to_json() const;
};

struct ExperimentResult {
  gp::GpModel model;
  /// Forecast window, natural units.
  gp::PredictiveDistribution forecast;
  /// Fitted distribution over the training window, for plotting history.
  gp::PredictiveDistribution history;
  std::vector<double> train_observed;
  DeviationReport report;
};

/// Design matrix rows [months since train start, covariate...] for `range`.
Eigen::MatrixXd design_matrix(const SeriesBundle& bundle, const ExperimentSpec& spec,
                              const MonthRange& range);

/// observed[i] < ci95_lower[i] || observed[i] > ci95_upper[i].
std::vector<bool> significance_verdict(const gp::PredictiveDistribution& dist,
                                       const std::vector<double>& observed);

DeviationReport make_report(const std::string& target, const gp::PredictiveDistribution& dist,
                            const std::vector<double>& observed);

/// Fits on spec.train and forecasts spec.forecast with observed covariates.
ExperimentResult run_experiment(const SeriesBundle& bundle, const ExperimentSpec& spec);

/// Runs independent experiments concurrently; results keep input order.
std::vector<ExperimentResult> run_experiments(const SeriesBundle& bundle,
                                              const std::vector<ExperimentSpec>& specs);

struct FuelSplitResult {
  std::vector<std::string> fuels;
  std::vector<ExperimentResult> results;  // parallel to fuels

  nlohmann::ordered_json to_json() const;
};

/// run_experiment on C_coal, C_gas and C_oil with spec's windows and config.
FuelSplitResult fuel_split_experiment(const SeriesBundle& bundle, const ExperimentSpec& spec);

}  // namespace powercf::counterfactual

namespace powercf::counterfactual {

/// One row per forecast month per target:
/// target,month,observed,mean,percent_deviation,ci_halfwidth_pct,ci95_lower,ci95_upper,z,significant
std::string deviation_csv(const std::vector<const ExperimentResult*>& results);

/// Figure data for one target: training history and forecast rows with
/// observed value, GP mean and 95% bounds.
/// target,month,phase,observed,mean,ci95_lower,ci95_upper
std::string plot_data_csv(const ExperimentResult& result);

/// fuel,counterfactual_average,observed_average,average_percent_deviation
std::string fuel_split_csv(const FuelSplitResult& split);

}  // namespace powercf::counterfactual
