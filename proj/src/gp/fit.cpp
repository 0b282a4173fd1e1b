#include "powercf/gp/fit.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace powercf::gp {

Standardization make_standardization(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                                     const std::vector<ColumnScaling>& scaling) {
  Standardization st;
  const double n = double(targets.size());
  st.target_mean = targets.mean();
  const double var = (targets.array() - st.target_mean).square().sum() / n;
  st.target_std = std::sqrt(var);
  if (!(st.target_std > 0.0) || !std::isfinite(st.target_std)) {
    throw DegenerateTargetError("training targets have zero variance; the likelihood is undefined");
  }
  if (!scaling.empty()) {
    if (Eigen::Index(scaling.size()) != inputs.cols()) {
      throw SchemaError("input scaling lists " + std::to_string(scaling.size()) +
                        " columns, inputs have " + std::to_string(inputs.cols()));
    }
    st.input_scale = Eigen::VectorXd::Ones(inputs.cols());
    for (Eigen::Index c = 0; c < inputs.cols(); ++c) {
      if (scaling[std::size_t(c)] != ColumnScaling::kDivideByMean) continue;
      const double m = inputs.col(c).mean();
      if (!(std::abs(m) > 0.0)) {
        throw DegenerateTargetError("input column " + std::to_string(c) +
                                    " has zero mean and cannot be scaled by it");
      }
      st.input_scale(c) = m;
    }
  }
  return st;
}

Eigen::VectorXd restart_start(const KernelSpec& spec, const FitConfig& config, int restart) {
  const Eigen::Index n = spec.n_learnable() + 1;
  if (restart == 0) return Eigen::VectorXd::Ones(n);
  // One generator per restart so the draw does not depend on thread scheduling.
  std::seed_seq seq{std::uint32_t(config.seed & 0xffffffffu), std::uint32_t(config.seed >> 32),
                    std::uint32_t(restart)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unif(std::log(config.restart_low),
                                              std::log(config.restart_high));
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = std::exp(unif(rng));
  return x;
}

namespace {

RestartDiagnostics run_restart(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               const KernelSpec& spec, const FitConfig& config, int restart) {
  RestartDiagnostics diag;
  diag.index = restart;
  const Eigen::Index n_kernel = spec.n_learnable();
  const Eigen::Index n = n_kernel + 1;

  diag.initial = restart_start(spec, config, restart);
  Eigen::VectorXd lower = Eigen::VectorXd::Constant(n, std::log(config.hyper_lower));
  Eigen::VectorXd upper = Eigen::VectorXd::Constant(n, std::log(config.hyper_upper));
  lower(n_kernel) = std::log(config.noise_floor);

  KernelSpec work = spec;
  // Minimise -LML over log-hyperparameters.
  const Objective objective = [&](const Eigen::VectorXd& u, Eigen::VectorXd& grad) {
    const Eigen::VectorXd theta = u.array().exp().matrix();
    work.set_learnable_values(theta.head(n_kernel));
    const LmlResult r = log_marginal_likelihood(work, theta(n_kernel), X, y, true);
    grad = -(r.gradient.array() * theta.array()).matrix();
    return -r.value;
  };

  try {
    BoxLbfgsOptions opts;
    opts.grad_tol = config.grad_tol;
    opts.max_iterations = config.max_iterations;
    const Eigen::VectorXd u0 = diag.initial.array().log().matrix();
    const OptimizeResult res = minimize_box(objective, u0, lower, upper, opts);
    diag.final = res.x.array().exp().matrix();
    diag.iterations = res.iterations;
    diag.status = to_string(res.status);
    diag.log_likelihood = -res.f;
    diag.ok = std::isfinite(diag.log_likelihood);
  } catch (const Error& e) {
    diag.ok = false;
    diag.status = "failed";
    diag.error = e.what();
  }
  return diag;
}

}  // namespace

GpModel fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, const KernelSpec& spec,
            const FitConfig& config) {
  if (inputs.rows() != targets.size()) {
    throw SchemaError("inputs have " + std::to_string(inputs.rows()) + " rows but targets have " +
                      std::to_string(targets.size()));
  }
  if (inputs.rows() < 12) {
    throw SchemaError("at least 12 training rows are required, got " +
                      std::to_string(inputs.rows()));
  }
  if (config.n_restarts < 1) throw SchemaError("n_restarts must be >= 1");
  spec.validate(inputs.cols());

  const Standardization st = make_standardization(inputs, targets, config.input_scaling);
  const Eigen::MatrixXd X = st.scale_inputs(inputs);
  const Eigen::VectorXd y = ((targets.array() - st.target_mean) / st.target_std).matrix();

  std::vector<RestartDiagnostics> restarts(std::size_t(config.n_restarts));
#pragma omp parallel for schedule(dynamic) if (config.parallel_restarts)
  for (int r = 0; r < config.n_restarts; ++r) {
    restarts[std::size_t(r)] = run_restart(X, y, spec, config, r);
  }

  // Strict '>' keeps the lowest index on ties.
  int best = -1;
  for (const auto& d : restarts) {
    if (d.ok && (best < 0 || d.log_likelihood > restarts[std::size_t(best)].log_likelihood)) {
      best = d.index;
    }
  }
  if (best < 0) {
    std::string msg = "all " + std::to_string(config.n_restarts) + " restarts failed:";
    for (const auto& d : restarts) msg += " [" + std::to_string(d.index) + "] " + d.error + ";";
    throw FitError(msg, restarts);
  }

  const Eigen::VectorXd& theta = restarts[std::size_t(best)].final;
  KernelSpec fitted = spec;
  fitted.set_learnable_values(theta.head(spec.n_learnable()));
  GpModel model(std::move(fitted), theta(spec.n_learnable()), X, y, st);
  model.seed = config.seed;
  model.restarts = std::move(restarts);
  model.chosen_restart = best;
  return model;
}

}  // namespace powercf::gp
