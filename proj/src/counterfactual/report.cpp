#include <sstream>

#include "powercf/counterfactual.hpp"
#include "powercf/format.hpp"

namespace powercf::counterfactual {

std::string deviation_csv(const std::vector<const ExperimentResult*>& results) {
  std::ostringstream out;
  out << "target,month,observed,mean,percent_deviation,ci_halfwidth_pct,ci95_lower,ci95_upper,z,"
         "significant\n";
  for (const ExperimentResult* r : results) {
    for (std::size_t i = 0; i < r->report.months.size(); ++i) {
      const auto& m = r->report.months[i];
      const auto k = Eigen::Index(i);
      out << r->report.target << ',' << m.month.str() << ',' << num(m.observed) << ','
          << num(m.mean) << ',' << num(m.percent_deviation) << ',' << num(m.ci_halfwidth_pct)
          << ',' << num(r->forecast.ci95_lower(k)) << ',' << num(r->forecast.ci95_upper(k)) << ','
          << num(m.z) << ',' << (m.significant ? "true" : "false") << '\n';
    }
  }
  return out.str();
}

std::string plot_data_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "target,month,phase,observed,mean,ci95_lower,ci95_upper\n";
  const auto& target = result.report.target;
  const auto& h = result.history;
  for (std::size_t i = 0; i < h.months.size(); ++i) {
    const auto k = Eigen::Index(i);
    out << target << ',' << h.months[i].str() << ",train," << num(result.train_observed[i]) << ','
        << num(h.mean(k)) << ',' << num(h.ci95_lower(k)) << ',' << num(h.ci95_upper(k)) << '\n';
  }
  const auto& f = result.forecast;
  for (std::size_t i = 0; i < f.months.size(); ++i) {
    const auto k = Eigen::Index(i);
    out << target << ',' << f.months[i].str() << ",forecast,"
        << num(result.report.months[i].observed) << ',' << num(f.mean(k)) << ','
        << num(f.ci95_lower(k)) << ',' << num(f.ci95_upper(k)) << '\n';
  }
  return out.str();
}

std::string fuel_split_csv(const FuelSplitResult& split) {
  std::ostringstream out;
  out << "fuel,counterfactual_average,observed_average,average_percent_deviation\n";
  for (std::size_t i = 0; i < split.fuels.size(); ++i) {
    const auto& r = split.results[i].report;
    out << split.fuels[i] << ',' << num(r.average_counterfactual) << ','
        << num(r.average_observed) << ',' << num(r.average_percent_deviation) << '\n';
  }
  return out.str();
}

}  // namespace powercf::counterfactual
