#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace powercf::gp {

enum class TermKind { kBias, kLinear, kStdPeriodic };

std::string to_string(TermKind kind);
TermKind term_kind_from_string(const std::string& name);

struct Hyperparameter {
  double value = 1.0;
  bool fixed = false;
};

/// One additive covariance term.
///   bias:         variance
///   linear:       variance * sum_d x_d x'_d           (over active dims)
///   std_periodic: variance * exp(-2 sin^2(pi |t - t'| / period) / lengthscale^2)
struct KernelTerm {
  TermKind kind = TermKind::kBias;
  std::vector<int> active_dims;
  Hyperparameter variance;
  Hyperparameter lengthscale;             // std_periodic only
  Hyperparameter period{12.0, true};      // std_periodic only

  static KernelTerm bias(std::vector<int> dims, double variance = 1.0);
  static KernelTerm linear(std::vector<int> dims, double variance = 1.0);
  static KernelTerm std_periodic(int dim, double period, bool period_fixed = true,
                                 double variance = 1.0, double lengthscale = 1.0);

  /// Number of learnable hyperparameters this term exposes.
  int n_learnable() const;
};

/// Sum of kernel terms over the columns of an input matrix.
struct KernelSpec {
  std::vector<KernelTerm> terms;

  /// Time column: bias + linear + 12-month std_periodic; each weather column
  /// (HDD, CDD): bias + linear.
  static KernelSpec time_weather(int time_dim = 0, std::vector<int> weather_dims = {1, 2},
                                 double period = 12.0);

  /// Throws DomainError / SchemaError on invalid hyperparameters or dims.
  void validate(Eigen::Index n_columns) const;

  int n_learnable() const;
  /// Learnable values in natural units, ordered term by term as
  /// variance, lengthscale, period.
  Eigen::VectorXd learnable_values() const;
  void set_learnable_values(const Eigen::Ref<const Eigen::VectorXd>& values);
  std::vector<std::string> learnable_names() const;
};

/// Cross-covariance K(X, X2). Rows are parallelised with OpenMP.
Eigen::MatrixXd kernel_eval(const KernelSpec& spec, const Eigen::MatrixXd& X,
                            const Eigen::MatrixXd& X2);

/// Single-threaded reference for kernel_eval.
Eigen::MatrixXd kernel_eval_serial(const KernelSpec& spec, const Eigen::MatrixXd& X,
                                   const Eigen::MatrixXd& X2);

Eigen::VectorXd kernel_diag(const KernelSpec& spec, const Eigen::MatrixXd& X);

/// dK(X, X)/d(theta_j) in natural units for every learnable hyperparameter,
/// in learnable_values() order.
std::vector<Eigen::MatrixXd> kernel_gradients(const KernelSpec& spec, const Eigen::MatrixXd& X);

}  // namespace powercf::gp
