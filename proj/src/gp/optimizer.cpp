#include "powercf/gp/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <vector>

#include "powercf/errors.hpp"

namespace powercf::gp {
namespace {

Eigen::VectorXd project(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                        const Eigen::VectorXd& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

double projected_grad_norm(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                           const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  return (project(x - g, lo, hi) - x).lpNorm<Eigen::Infinity>();
}

// Variables pinned at a bound with the gradient pushing further out.
Eigen::Array<bool, Eigen::Dynamic, 1> active_set(const Eigen::VectorXd& x,
                                                 const Eigen::VectorXd& g,
                                                 const Eigen::VectorXd& lo,
                                                 const Eigen::VectorXd& hi) {
  Eigen::Array<bool, Eigen::Dynamic, 1> active(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    active(i) = (x(i) <= lo(i) && g(i) > 0.0) || (x(i) >= hi(i) && g(i) < 0.0);
  }
  return active;
}

struct Pair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho;
};

Eigen::VectorXd two_loop(const std::deque<Pair>& memory, Eigen::VectorXd q) {
  std::vector<double> a(memory.size());
  for (std::size_t k = memory.size(); k-- > 0;) {
    a[k] = memory[k].rho * memory[k].s.dot(q);
    q -= a[k] * memory[k].y;
  }
  if (!memory.empty()) {
    const auto& last = memory.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (std::size_t k = 0; k < memory.size(); ++k) {
    const double b = memory[k].rho * memory[k].y.dot(q);
    q += (a[k] - b) * memory[k].s;
  }
  return q;
}

}  // namespace

std::string to_string(OptimizeStatus status) {
  switch (status) {
    case OptimizeStatus::kGradientConverged: return "gradient_converged";
    case OptimizeStatus::kFunctionConverged: return "function_converged";
    case OptimizeStatus::kMaxIterations: return "max_iterations";
    case OptimizeStatus::kStalled: return "stalled";
  }
  return "unknown";
}

OptimizeResult minimize_box(const Objective& objective, Eigen::VectorXd x0,
                            const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                            const BoxLbfgsOptions& options) {
  const Eigen::Index n = x0.size();
  if (lower.size() != n || upper.size() != n) {
    throw SchemaError("bounds dimension does not match starting point");
  }

  OptimizeResult result;
  result.x = project(x0, lower, upper);
  Eigen::VectorXd g(n);
  result.f = objective(result.x, g);
  if (!std::isfinite(result.f) || !g.allFinite()) {
    throw NumericalError("objective is not finite at the starting point");
  }

  std::deque<Pair> memory;
  for (result.iterations = 0; result.iterations < options.max_iterations; ++result.iterations) {
    result.projected_grad_norm = projected_grad_norm(result.x, g, lower, upper);
    if (result.projected_grad_norm < options.grad_tol) {
      result.status = OptimizeStatus::kGradientConverged;
      return result;
    }

    const auto active = active_set(result.x, g, lower, upper);
    Eigen::VectorXd g_free = active.select(Eigen::VectorXd::Zero(n), g);
    Eigen::VectorXd d = -two_loop(memory, g_free);
    d = active.select(Eigen::VectorXd::Zero(n), d);
    if (!(d.dot(g_free) < 0.0) || !d.allFinite()) {
      memory.clear();
      d = -g_free;
    }

    // Backtracking on the projected path; fall back to steepest descent once.
    bool accepted = false;
    Eigen::VectorXd x_new(n), g_new(n);
    double f_new = 0.0;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      double step = memory.empty() ? std::min(1.0, 1.0 / d.lpNorm<Eigen::Infinity>()) : 1.0;
      for (int ls = 0; ls < options.max_line_search; ++ls, step *= 0.5) {
        x_new = project(result.x + step * d, lower, upper);
        const double decrease = g.dot(x_new - result.x);
        if (decrease >= 0.0) continue;
        try {
          f_new = objective(x_new, g_new);
        } catch (const NumericalError&) {
          continue;
        }
        if (std::isfinite(f_new) && g_new.allFinite() &&
            f_new <= result.f + options.armijo * decrease) {
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        if (memory.empty()) break;
        memory.clear();
        d = -g_free;
      }
    }
    if (!accepted) {
      result.status = OptimizeStatus::kStalled;
      return result;
    }

    Pair pair{x_new - result.x, g_new - g, 0.0};
    const double sy = pair.s.dot(pair.y);
    if (sy > 1e-10 * pair.y.squaredNorm()) {
      pair.rho = 1.0 / sy;
      memory.push_back(std::move(pair));
      if (int(memory.size()) > options.memory) memory.pop_front();
    }

    const double f_old = result.f;
    result.x = x_new;
    result.f = f_new;
    g = g_new;
    const double scale = std::max({std::abs(f_old), std::abs(f_new), 1.0});
    if ((f_old - f_new) / scale <= options.f_rel_tol) {
      result.projected_grad_norm = projected_grad_norm(result.x, g, lower, upper);
      result.status = result.projected_grad_norm < options.grad_tol
                          ? OptimizeStatus::kGradientConverged
                          : OptimizeStatus::kFunctionConverged;
      ++result.iterations;
      return result;
    }
  }
  result.projected_grad_norm = projected_grad_norm(result.x, g, lower, upper);
  result.status = result.projected_grad_norm < options.grad_tol ? OptimizeStatus::kGradientConverged
                                                                : OptimizeStatus::kMaxIterations;
  return result;
}

}  // namespace powercf::gp
