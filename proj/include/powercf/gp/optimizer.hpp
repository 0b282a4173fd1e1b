#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

namespace powercf::gp {

/// Projected limited-memory BFGS for  min f(x)  s.t.  lower <= x <= upper.
struct BoxLbfgsOptions {
  int memory = 10;
  int max_iterations = 1000;
  /// Stop when the projected gradient's infinity norm falls below this.
  double grad_tol = 1e-5;
  /// Stop when the relative decrease of f in one step falls below this
  /// (the factr = 1e7 default of L-BFGS-B).
  double f_rel_tol = 1e7 * 2.220446049250313e-16;
  int max_line_search = 40;
  double armijo = 1e-4;
};

enum class OptimizeStatus { kGradientConverged, kFunctionConverged, kMaxIterations, kStalled };

std::string to_string(OptimizeStatus status);

struct OptimizeResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int iterations = 0;
  double projected_grad_norm = 0.0;
  OptimizeStatus status = OptimizeStatus::kStalled;
};

/// Objective returning f(x) and writing the gradient. May throw; a throw
/// during the line search is treated as f = +inf, a throw at the starting
/// point propagates.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

OptimizeResult minimize_box(const Objective& objective, Eigen::VectorXd x0,
                            const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                            const BoxLbfgsOptions& options = {});

}  // namespace powercf::gp
