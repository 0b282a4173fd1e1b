#include "powercf/gp/kernel.hpp"

#include <cmath>
#include <numbers>

#include "powercf/errors.hpp"

namespace powercf::gp {
namespace {

constexpr double kPi = std::numbers::pi;

// Below this many entries the OpenMP fork costs more than the work.
constexpr Eigen::Index kParallelThreshold = 4096;

double term_value(const KernelTerm& term, const Eigen::MatrixXd& X, Eigen::Index i,
                  const Eigen::MatrixXd& X2, Eigen::Index j) {
  switch (term.kind) {
    case TermKind::kBias:
      return term.variance.value;
    case TermKind::kLinear: {
      double dot = 0.0;
      for (int d : term.active_dims) dot += X(i, d) * X2(j, d);
      return term.variance.value * dot;
    }
    case TermKind::kStdPeriodic: {
      const int d = term.active_dims.front();
      const double s = std::sin(kPi * std::abs(X(i, d) - X2(j, d)) / term.period.value);
      const double l = term.lengthscale.value;
      return term.variance.value * std::exp(-2.0 * s * s / (l * l));
    }
  }
  return 0.0;
}

void check_inputs(const KernelSpec& spec, const Eigen::MatrixXd& X, const Eigen::MatrixXd& X2) {
  if (X.cols() != X2.cols()) {
    throw SchemaError("kernel inputs have " + std::to_string(X.cols()) + " and " +
                      std::to_string(X2.cols()) + " columns");
  }
  spec.validate(X.cols());
}

}  // namespace

std::string to_string(TermKind kind) {
  switch (kind) {
    case TermKind::kBias: return "bias";
    case TermKind::kLinear: return "linear";
    case TermKind::kStdPeriodic: return "std_periodic";
  }
  return "unknown";
}

TermKind term_kind_from_string(const std::string& name) {
  if (name == "bias") return TermKind::kBias;
  if (name == "linear") return TermKind::kLinear;
  if (name == "std_periodic") return TermKind::kStdPeriodic;
  throw SchemaError("unknown kernel term kind '" + name + "'");
}

KernelTerm KernelTerm::bias(std::vector<int> dims, double variance) {
  KernelTerm t;
  t.kind = TermKind::kBias;
  t.active_dims = std::move(dims);
  t.variance.value = variance;
  return t;
}

KernelTerm KernelTerm::linear(std::vector<int> dims, double variance) {
  KernelTerm t;
  t.kind = TermKind::kLinear;
  t.active_dims = std::move(dims);
  t.variance.value = variance;
  return t;
}

KernelTerm KernelTerm::std_periodic(int dim, double period, bool period_fixed, double variance,
                                    double lengthscale) {
  KernelTerm t;
  t.kind = TermKind::kStdPeriodic;
  t.active_dims = {dim};
  t.variance.value = variance;
  t.lengthscale.value = lengthscale;
  t.period = {period, period_fixed};
  return t;
}

int KernelTerm::n_learnable() const {
  int n = variance.fixed ? 0 : 1;
  if (kind == TermKind::kStdPeriodic) {
    n += lengthscale.fixed ? 0 : 1;
    n += period.fixed ? 0 : 1;
  }
  return n;
}

KernelSpec KernelSpec::time_weather(int time_dim, std::vector<int> weather_dims, double period) {
  KernelSpec spec;
  spec.terms.push_back(KernelTerm::bias({time_dim}));
  spec.terms.push_back(KernelTerm::linear({time_dim}));
  spec.terms.push_back(KernelTerm::std_periodic(time_dim, period, /*period_fixed=*/true));
  for (int d : weather_dims) {
    spec.terms.push_back(KernelTerm::bias({d}));
    spec.terms.push_back(KernelTerm::linear({d}));
  }
  return spec;
}

void KernelSpec::validate(Eigen::Index n_columns) const {
  for (const auto& t : terms) {
    if (t.active_dims.empty() && t.kind != TermKind::kBias) {
      throw SchemaError(to_string(t.kind) + " term has no active input dims");
    }
    for (int d : t.active_dims) {
      if (d < 0 || d >= n_columns) {
        throw SchemaError(to_string(t.kind) + " term uses input dim " + std::to_string(d) +
                          " but inputs have " + std::to_string(n_columns) + " columns");
      }
    }
    if (!(t.variance.value >= 0.0) || !std::isfinite(t.variance.value)) {
      throw DomainError(to_string(t.kind) + " variance must be >= 0");
    }
    if (t.kind == TermKind::kStdPeriodic) {
      if (t.active_dims.size() != 1) {
        throw SchemaError("std_periodic term must act on exactly one input dim");
      }
      if (!(t.lengthscale.value > 0.0) || !std::isfinite(t.lengthscale.value)) {
        throw DomainError("std_periodic lengthscale must be > 0");
      }
      if (!(t.period.value > 0.0) || !std::isfinite(t.period.value)) {
        throw DomainError("std_periodic period must be > 0");
      }
    }
  }
}

int KernelSpec::n_learnable() const {
  int n = 0;
  for (const auto& t : terms) n += t.n_learnable();
  return n;
}

Eigen::VectorXd KernelSpec::learnable_values() const {
  Eigen::VectorXd v(n_learnable());
  int k = 0;
  for (const auto& t : terms) {
    if (!t.variance.fixed) v(k++) = t.variance.value;
    if (t.kind == TermKind::kStdPeriodic) {
      if (!t.lengthscale.fixed) v(k++) = t.lengthscale.value;
      if (!t.period.fixed) v(k++) = t.period.value;
    }
  }
  return v;
}

void KernelSpec::set_learnable_values(const Eigen::Ref<const Eigen::VectorXd>& values) {
  if (values.size() != n_learnable()) {
    throw SchemaError("expected " + std::to_string(n_learnable()) + " hyperparameters, got " +
                      std::to_string(values.size()));
  }
  int k = 0;
  for (auto& t : terms) {
    if (!t.variance.fixed) t.variance.value = values(k++);
    if (t.kind == TermKind::kStdPeriodic) {
      if (!t.lengthscale.fixed) t.lengthscale.value = values(k++);
      if (!t.period.fixed) t.period.value = values(k++);
    }
  }
}

std::vector<std::string> KernelSpec::learnable_names() const {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    std::string prefix = std::to_string(i) + "." + to_string(t.kind) + ".";
    if (!t.variance.fixed) names.push_back(prefix + "variance");
    if (t.kind == TermKind::kStdPeriodic) {
      if (!t.lengthscale.fixed) names.push_back(prefix + "lengthscale");
      if (!t.period.fixed) names.push_back(prefix + "period");
    }
  }
  return names;
}

Eigen::MatrixXd kernel_eval(const KernelSpec& spec, const Eigen::MatrixXd& X,
                            const Eigen::MatrixXd& X2) {
  check_inputs(spec, X, X2);
  const Eigen::Index n = X.rows();
  const Eigen::Index m = X2.rows();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, m);
  // Each thread owns whole rows of K; terms are summed in a fixed order so the
  // result is bit-identical to kernel_eval_serial.
#pragma omp parallel for schedule(static) if (n * m >= kParallelThreshold)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      double k = 0.0;
      for (const auto& term : spec.terms) k += term_value(term, X, i, X2, j);
      K(i, j) = k;
    }
  }
  return K;
}

Eigen::MatrixXd kernel_eval_serial(const KernelSpec& spec, const Eigen::MatrixXd& X,
                                   const Eigen::MatrixXd& X2) {
  check_inputs(spec, X, X2);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(X.rows(), X2.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X2.rows(); ++j) {
      double k = 0.0;
      for (const auto& term : spec.terms) k += term_value(term, X, i, X2, j);
      K(i, j) = k;
    }
  }
  return K;
}

Eigen::VectorXd kernel_diag(const KernelSpec& spec, const Eigen::MatrixXd& X) {
  spec.validate(X.cols());
  Eigen::VectorXd diag(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    double k = 0.0;
    for (const auto& term : spec.terms) k += term_value(term, X, i, X, i);
    diag(i) = k;
  }
  return diag;
}

std::vector<Eigen::MatrixXd> kernel_gradients(const KernelSpec& spec, const Eigen::MatrixXd& X) {
  spec.validate(X.cols());
  const Eigen::Index n = X.rows();
  std::vector<Eigen::MatrixXd> grads;
  grads.reserve(spec.n_learnable());
  for (const auto& t : spec.terms) {
    const double var = t.variance.value;
    if (t.kind != TermKind::kStdPeriodic) {
      if (t.variance.fixed) continue;
      Eigen::MatrixXd g(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
          if (t.kind == TermKind::kBias) {
            g(i, j) = 1.0;
          } else {
            double dot = 0.0;
            for (int d : t.active_dims) dot += X(i, d) * X(j, d);
            g(i, j) = dot;
          }
        }
      }
      grads.push_back(std::move(g));
      continue;
    }

    const int d = t.active_dims.front();
    const double l = t.lengthscale.value;
    const double T = t.period.value;
    Eigen::MatrixXd d_var(n, n), d_len(n, n), d_per(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double dist = std::abs(X(i, d) - X(j, d));
        const double u = kPi * dist / T;
        const double s = std::sin(u);
        const double e = std::exp(-2.0 * s * s / (l * l));
        d_var(i, j) = e;
        d_len(i, j) = var * e * 4.0 * s * s / (l * l * l);
        d_per(i, j) = var * e * 2.0 * kPi * dist * std::sin(2.0 * u) / (l * l * T * T);
      }
    }
    if (!t.variance.fixed) grads.push_back(std::move(d_var));
    if (!t.lengthscale.fixed) grads.push_back(std::move(d_len));
    if (!t.period.fixed) grads.push_back(std::move(d_per));
  }
  return grads;
}

}  // namespace powercf::gp
