#include "powercf/gp/model.hpp"

#include <cmath>
#include <numbers>

#include "powercf/errors.hpp"

namespace powercf::gp {

JitteredCholesky jittered_cholesky(const Eigen::MatrixXd& K) {
  const Eigen::Index n = K.rows();
  JitteredCholesky out;
  out.llt.compute(K);
  if (out.llt.info() == Eigen::Success && K.allFinite()) return out;

  const double mean_diag = std::abs(K.diagonal().mean());
  if (!std::isfinite(mean_diag)) {
    throw NumericalError("covariance matrix has non-finite entries");
  }
  for (double rel = 1e-8; rel <= 1e-2 * (1 + 1e-12); rel *= 10.0) {
    const double jitter = rel * mean_diag;
    Eigen::MatrixXd Kj = K;
    Kj.diagonal().array() += jitter;
    out.llt.compute(Kj);
    if (out.llt.info() == Eigen::Success) {
      out.jitter = jitter;
      return out;
    }
  }
  throw NumericalError("Cholesky failed for " + std::to_string(n) + "x" + std::to_string(n) +
                       " covariance even with jitter 1e-2 * mean(diag)");
}

Eigen::MatrixXd Standardization::scale_inputs(const Eigen::MatrixXd& X) const {
  if (input_scale.size() == 0) return X;
  if (input_scale.size() != X.cols()) {
    throw SchemaError("input has " + std::to_string(X.cols()) + " columns, model expects " +
                      std::to_string(input_scale.size()));
  }
  Eigen::MatrixXd out = X;
  for (Eigen::Index c = 0; c < X.cols(); ++c) out.col(c) /= input_scale(c);
  return out;
}

LmlResult log_marginal_likelihood(const KernelSpec& kernel, double noise_variance,
                                  const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                  bool with_gradient) {
  if (X.rows() != y.size()) {
    throw SchemaError("train inputs have " + std::to_string(X.rows()) + " rows but targets have " +
                      std::to_string(y.size()));
  }
  if (!(noise_variance >= 0.0)) throw DomainError("noise variance must be >= 0");
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd K = kernel_eval(kernel, X, X);
  K.diagonal().array() += noise_variance;

  const JitteredCholesky chol = jittered_cholesky(K);
  const Eigen::VectorXd alpha = chol.llt.solve(y);
  const Eigen::MatrixXd L = chol.llt.matrixL();

  LmlResult out;
  out.jitter = chol.jitter;
  out.value = -0.5 * y.dot(alpha) - L.diagonal().array().log().sum() -
              0.5 * double(n) * std::log(2.0 * std::numbers::pi);
  if (!std::isfinite(out.value)) throw NumericalError("log marginal likelihood is not finite");
  if (!with_gradient) return out;

  // dL/dtheta = 1/2 tr((alpha alpha^T - K^-1) dK/dtheta)
  const Eigen::MatrixXd Kinv = chol.llt.solve(Eigen::MatrixXd::Identity(n, n));
  const Eigen::MatrixXd W = alpha * alpha.transpose() - Kinv;
  const auto dK = kernel_gradients(kernel, X);
  out.gradient.resize(Eigen::Index(dK.size()) + 1);
  for (std::size_t j = 0; j < dK.size(); ++j) {
    out.gradient(Eigen::Index(j)) = 0.5 * W.cwiseProduct(dK[j]).sum();
  }
  out.gradient(Eigen::Index(dK.size())) = 0.5 * W.trace();
  return out;
}

GpModel::GpModel(KernelSpec kernel, double noise_variance, Eigen::MatrixXd train_inputs,
                 Eigen::VectorXd train_targets, Standardization standardization)
    : kernel_(std::move(kernel)),
      noise_variance_(noise_variance),
      train_inputs_(std::move(train_inputs)),
      train_targets_(std::move(train_targets)),
      standardization_(std::move(standardization)) {
  if (train_inputs_.rows() != train_targets_.size()) {
    throw SchemaError("train inputs have " + std::to_string(train_inputs_.rows()) +
                      " rows but targets have " + std::to_string(train_targets_.size()));
  }
  if (!(noise_variance_ >= 0.0)) throw DomainError("noise variance must be >= 0");
  Eigen::MatrixXd K = kernel_eval(kernel_, train_inputs_, train_inputs_);
  K.diagonal().array() += noise_variance_;
  const JitteredCholesky chol = jittered_cholesky(K);

  auto state = std::make_shared<State>();
  state->L = chol.llt.matrixL();
  state->alpha = chol.llt.solve(train_targets_);
  state->jitter = chol.jitter;
  state->lml = -0.5 * train_targets_.dot(state->alpha) -
               state->L.diagonal().array().log().sum() -
               0.5 * double(train_targets_.size()) * std::log(2.0 * std::numbers::pi);
  state_ = std::move(state);
}

PredictiveDistribution GpModel::predict(const Eigen::MatrixXd& X_star) const {
  const Eigen::MatrixXd Xs = standardization_.scale_inputs(X_star);
  if (Xs.cols() != train_inputs_.cols()) {
    throw SchemaError("prediction inputs have " + std::to_string(Xs.cols()) +
                      " columns, training inputs have " + std::to_string(train_inputs_.cols()));
  }
  const Eigen::MatrixXd Ks = kernel_eval(kernel_, Xs, train_inputs_);  // m x n
  const Eigen::VectorXd f_mean = Ks * state_->alpha;
  const Eigen::MatrixXd V =
      state_->L.triangularView<Eigen::Lower>().solve(Ks.transpose());  // n x m
  Eigen::VectorXd f_var = kernel_diag(kernel_, Xs) - V.colwise().squaredNorm().transpose();
  f_var = f_var.cwiseMax(0.0);

  const double sd = standardization_.target_std;
  PredictiveDistribution out;
  out.mean = (f_mean.array() * sd + standardization_.target_mean).matrix();
  out.latent_variance = f_var * (sd * sd);
  out.variance = ((f_var.array() + noise_variance_) * (sd * sd)).matrix();
  const Eigen::ArrayXd half = PredictiveDistribution::kZ95 * out.variance.array().sqrt();
  out.ci95_lower = (out.mean.array() - half).matrix();
  out.ci95_upper = (out.mean.array() + half).matrix();
  return out;
}

}  // namespace powercf::gp
