#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "powercf/calendar.hpp"
#include "powercf/gp/kernel.hpp"

namespace powercf::gp {

/// Cholesky factor of K + jitter * I. Jitter starts at 1e-8 * mean(diag(K))
/// and grows x10 up to 1e-2 * mean(diag(K)); past that NumericalError.
struct JitteredCholesky {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;
};

JitteredCholesky jittered_cholesky(const Eigen::MatrixXd& K);

/// Maps natural-unit data to the units the GP is fitted in.
struct Standardization {
  double target_mean = 0.0;
  double target_std = 1.0;
  Eigen::VectorXd input_scale;  // raw column / scale; empty means identity

  double standardize(double y) const { return (y - target_mean) / target_std; }
  double destandardize(double z) const { return target_mean + target_std * z; }
  Eigen::MatrixXd scale_inputs(const Eigen::MatrixXd& X) const;
};

struct LmlResult {
  double value = 0.0;
  /// d value / d theta in natural units: kernel learnables, then noise variance.
  Eigen::VectorXd gradient;
  double jitter = 0.0;
};

/// -1/2 y^T K^-1 y - 1/2 log|K| - n/2 log(2 pi), K = Gram + noise * I.
LmlResult log_marginal_likelihood(const KernelSpec& kernel, double noise_variance,
                                  const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                  bool with_gradient = true);

struct RestartDiagnostics {
  int index = 0;
  bool ok = false;
  double log_likelihood = 0.0;
  int iterations = 0;
  std::string status;
  std::string error;
  Eigen::VectorXd initial;  // natural units
  Eigen::VectorXd final;
};

struct PredictiveDistribution {
  std::vector<YearMonth> months;  // filled by callers that know the calendar
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;         // includes observation noise
  Eigen::VectorXd latent_variance;  // posterior variance of f only
  Eigen::VectorXd ci95_lower;
  Eigen::VectorXd ci95_upper;

  static constexpr double kZ95 = 1.96;
};

/// An exact GP conditioned on training data. Immutable once built; the
/// factorisation is computed in the constructor and shared between copies.
class GpModel {
 public:
  GpModel(KernelSpec kernel, double noise_variance, Eigen::MatrixXd train_inputs,
          Eigen::VectorXd train_targets, Standardization standardization = {});

  const KernelSpec& kernel() const { return kernel_; }
  double noise_variance() const { return noise_variance_; }
  /// Scaled inputs and standardized targets the GP was conditioned on.
  const Eigen::MatrixXd& train_inputs() const { return train_inputs_; }
  const Eigen::VectorXd& train_targets() const { return train_targets_; }
  const Standardization& standardization() const { return standardization_; }
  double log_likelihood() const { return state_->lml; }
  double jitter() const { return state_->jitter; }

  std::uint64_t seed = 0;
  std::vector<RestartDiagnostics> restarts;
  int chosen_restart = -1;

  /// Posterior predictive at raw (unscaled) inputs, natural target units.
  PredictiveDistribution predict(const Eigen::MatrixXd& X_star) const;

 private:
  struct State {
    Eigen::MatrixXd L;       // lower Cholesky factor of K + noise I (+ jitter)
    Eigen::VectorXd alpha;   // K^-1 y
    double lml = 0.0;
    double jitter = 0.0;
  };

  KernelSpec kernel_;
  double noise_variance_;
  Eigen::MatrixXd train_inputs_;
  Eigen::VectorXd train_targets_;
  Standardization standardization_;
  std::shared_ptr<const State> state_;
};

inline LmlResult log_marginal_likelihood(const GpModel& model, bool with_gradient = true) {
  return log_marginal_likelihood(model.kernel(), model.noise_variance(), model.train_inputs(),
                                 model.train_targets(), with_gradient);
}

inline PredictiveDistribution predict(const GpModel& model, const Eigen::MatrixXd& X_star) {
  return model.predict(X_star);
}

}  // namespace powercf::gp
