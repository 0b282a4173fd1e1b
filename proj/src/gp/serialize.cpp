#include "powercf/gp/serialize.hpp"

#include "powercf/errors.hpp"

namespace powercf::gp {
namespace {

using json = nlohmann::ordered_json;

json vec(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd to_vec(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), Eigen::Index(values.size()));
}

json hyper(const Hyperparameter& h) { return {{"value", h.value}, {"fixed", h.fixed}}; }
Hyperparameter to_hyper(const json& j) {
  return {j.at("value").get<double>(), j.value("fixed", false)};
}

}  // namespace

json kernel_to_json(const KernelSpec& spec) {
  json terms = json::array();
  for (const auto& t : spec.terms) {
    json term{{"kind", to_string(t.kind)}, {"active_dims", t.active_dims},
              {"variance", hyper(t.variance)}};
    if (t.kind == TermKind::kStdPeriodic) {
      term["lengthscale"] = hyper(t.lengthscale);
      term["period"] = hyper(t.period);
    }
    terms.push_back(std::move(term));
  }
  return {{"terms", std::move(terms)}};
}

KernelSpec kernel_from_json(const json& doc) {
  try {
    KernelSpec spec;
    for (const auto& j : doc.at("terms")) {
      KernelTerm t;
      t.kind = term_kind_from_string(j.at("kind").get<std::string>());
      t.active_dims = j.at("active_dims").get<std::vector<int>>();
      t.variance = to_hyper(j.at("variance"));
      if (t.kind == TermKind::kStdPeriodic) {
        t.lengthscale = to_hyper(j.at("lengthscale"));
        t.period = to_hyper(j.at("period"));
      }
      spec.terms.push_back(std::move(t));
    }
    return spec;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed kernel document: ") + e.what());
  }
}

json model_to_json(const GpModel& model) {
  const auto& st = model.standardization();
  json rows = json::array();
  const auto& X = model.train_inputs();
  for (Eigen::Index i = 0; i < X.rows(); ++i) rows.push_back(vec(X.row(i).transpose()));

  json restarts = json::array();
  for (const auto& r : model.restarts) {
    json jr{{"index", r.index},         {"ok", r.ok},
            {"log_likelihood", r.ok ? json(r.log_likelihood) : json(nullptr)},
            {"iterations", r.iterations}, {"status", r.status}};
    if (!r.error.empty()) jr["error"] = r.error;
    restarts.push_back(std::move(jr));
  }

  return {{"kernel", kernel_to_json(model.kernel())},
          {"noise_variance", model.noise_variance()},
          {"log_likelihood", model.log_likelihood()},
          {"seed", model.seed},
          {"standardization",
           {{"target_mean", st.target_mean},
            {"target_std", st.target_std},
            {"input_scale", vec(st.input_scale)}}},
          {"train_inputs", std::move(rows)},
          {"train_targets", vec(model.train_targets())},
          {"chosen_restart", model.chosen_restart},
          {"restarts", std::move(restarts)}};
}

GpModel model_from_json(const json& doc) {
  try {
    Standardization st;
    const auto& js = doc.at("standardization");
    st.target_mean = js.at("target_mean").get<double>();
    st.target_std = js.at("target_std").get<double>();
    st.input_scale = to_vec(js.at("input_scale"));

    const auto& rows = doc.at("train_inputs");
    const Eigen::Index n = Eigen::Index(rows.size());
    const Eigen::Index cols = n > 0 ? Eigen::Index(rows.front().size()) : 0;
    Eigen::MatrixXd X(n, cols);
    for (Eigen::Index i = 0; i < n; ++i) X.row(i) = to_vec(rows[std::size_t(i)]).transpose();

    GpModel model(kernel_from_json(doc.at("kernel")), doc.at("noise_variance").get<double>(), X,
                  to_vec(doc.at("train_targets")), st);
    model.seed = doc.value("seed", std::uint64_t{0});
    model.chosen_restart = doc.value("chosen_restart", -1);
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed model document: ") + e.what());
  }
}

}  // namespace powercf::gp
