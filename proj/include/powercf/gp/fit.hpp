#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "powercf/errors.hpp"
#include "powercf/gp/model.hpp"
#include "powercf/gp/optimizer.hpp"

namespace powercf::gp {

enum class ColumnScaling { kNone, kDivideByMean };

struct FitConfig {
  int n_restarts = 5;
  double grad_tol = 1e-5;
  int max_iterations = 1000;
  /// Restarts after the first draw each learnable value log-uniformly here.
  double restart_low = 1e-2;
  double restart_high = 1e2;
  std::uint64_t seed = 0;

  double noise_floor = 1e-10;  // standardized units
  double hyper_lower = 1e-10;
  double hyper_upper = 1e6;

  /// Per input column; empty means no scaling.
  std::vector<ColumnScaling> input_scaling;
  bool parallel_restarts = true;
};

class FitError : public NumericalError {
 public:
  FitError(const std::string& what, std::vector<RestartDiagnostics> restarts)
      : NumericalError(what), restarts_(std::move(restarts)) {}
  const std::vector<RestartDiagnostics>& restarts() const { return restarts_; }

 private:
  std::vector<RestartDiagnostics> restarts_;
};

/// Standardization derived from training data: z-scored targets and
/// per-column input scales. Throws DegenerateTargetError for constant targets.
Standardization make_standardization(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                                     const std::vector<ColumnScaling>& scaling);

/// Maximises the log marginal likelihood over the learnable hyperparameters
/// (and the noise variance) from config.n_restarts starting points and
/// returns the best restart. Deterministic for a given config.seed.
GpModel fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, const KernelSpec& spec,
            const FitConfig& config = {});

/// Starting point (natural units, kernel learnables then noise) of a restart.
Eigen::VectorXd restart_start(const KernelSpec& spec, const FitConfig& config, int restart);

}  // namespace powercf::gp
