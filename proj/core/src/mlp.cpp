#include "rigforge/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "rigforge/error.hpp"

namespace rigforge {

Mlp::Mlp(std::vector<int> layer_sizes) : layer_sizes_(std::move(layer_sizes)) {
  if (layer_sizes_.size() < 2) {
    throw ValidationError(ErrorCode::ConfigError,
                          "MLP needs at least input and output layers");
  }
  for (size_t l = 1; l < layer_sizes_.size(); ++l) {
    weights_.emplace_back(
        Eigen::MatrixXd::Zero(layer_sizes_[l], layer_sizes_[l - 1]));
    biases_.emplace_back(Eigen::VectorXd::Zero(layer_sizes_[l]));
  }
}

Mlp Mlp::random_init(const std::vector<int>& layer_sizes, uint64_t seed) {
  Mlp model(layer_sizes);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (size_t l = 0; l < model.weights_.size(); ++l) {
    const double stddev = std::sqrt(2.0 / model.layer_sizes_[l]);
    auto& w = model.weights_[l];
    for (int r = 0; r < w.rows(); ++r) {
      for (int c = 0; c < w.cols(); ++c) {
        w(r, c) = stddev * normal(rng);
      }
    }
  }
  return model;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& input) const {
  if (input.rows() != input_size()) {
    throw ValidationError(ErrorCode::DimensionMismatch,
                          "MLP input has " + std::to_string(input.rows()) +
                              " rows, expected " +
                              std::to_string(input_size()));
  }
  Eigen::MatrixXd x = input;
  for (size_t l = 0; l < weights_.size(); ++l) {
    x = (weights_[l] * x).colwise() + biases_[l];
    if (l + 1 < weights_.size()) x = x.cwiseMax(0.0);
  }
  return x;
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& input) const {
  return forward(Eigen::MatrixXd(input)).col(0);
}

std::vector<Eigen::MatrixXd> mlp_forward_cached(const Mlp& model,
                                                const Eigen::MatrixXd& input) {
  std::vector<Eigen::MatrixXd> activations{input};
  const size_t n_layers = model.weights().size();
  for (size_t l = 0; l < n_layers; ++l) {
    Eigen::MatrixXd z =
        (model.weights()[l] * activations.back()).colwise() + model.biases()[l];
    if (l + 1 < n_layers) z = z.cwiseMax(0.0);
    activations.push_back(std::move(z));
  }
  return activations;
}

MlpGradients mlp_backward(const Mlp& model,
                          const std::vector<Eigen::MatrixXd>& activations,
                          const Eigen::MatrixXd& output_grad) {
  const size_t n_layers = model.weights().size();
  MlpGradients grads;
  grads.weights.resize(n_layers);
  grads.biases.resize(n_layers);
  Eigen::MatrixXd delta = output_grad;
  for (int l = static_cast<int>(n_layers) - 1; l >= 0; --l) {
    grads.weights[l] = delta * activations[l].transpose();
    grads.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      delta = (model.weights()[l].transpose() * delta).array() *
              (activations[l].array() > 0.0).cast<double>();
    }
  }
  return grads;
}

AdamOptimizer::AdamOptimizer(const Mlp& model, double learning_rate)
    : lr_(learning_rate) {
  for (const auto& w : model.weights()) {
    mw_.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    vw_.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
  }
  for (const auto& b : model.biases()) {
    mb_.push_back(Eigen::VectorXd::Zero(b.size()));
    vb_.push_back(Eigen::VectorXd::Zero(b.size()));
  }
}

void AdamOptimizer::step(Mlp& model, const MlpGradients& grads) {
  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1, t_);
  const double bc2 = 1.0 - std::pow(beta2, t_);
  for (size_t l = 0; l < mw_.size(); ++l) {
    mw_[l] = beta1 * mw_[l] + (1 - beta1) * grads.weights[l];
    vw_[l] = beta2 * vw_[l] +
             (1 - beta2) * grads.weights[l].cwiseProduct(grads.weights[l]);
    mb_[l] = beta1 * mb_[l] + (1 - beta1) * grads.biases[l];
    vb_[l] = beta2 * vb_[l] +
             (1 - beta2) * grads.biases[l].cwiseProduct(grads.biases[l]);
    model.weights()[l] -=
        lr_ * (mw_[l] / bc1)
                  .cwiseQuotient(((vw_[l] / bc2).cwiseSqrt().array() + eps).matrix());
    model.biases()[l] -=
        lr_ * (mb_[l] / bc1)
                  .cwiseQuotient(((vb_[l] / bc2).cwiseSqrt().array() + eps).matrix());
  }
}

namespace {

double mse(const Mlp& model, const Eigen::MatrixXd& x,
           const Eigen::MatrixXd& y) {
  if (x.cols() == 0) return 0.0;
  return (model.forward(x) - y).squaredNorm() / static_cast<double>(x.cols());
}

}  // namespace

MlpTrainReport train_mlp(Mlp& model, const Eigen::MatrixXd& inputs,
                         const Eigen::MatrixXd& targets,
                         const Eigen::MatrixXd& holdout_inputs,
                         const Eigen::MatrixXd& holdout_targets,
                         const MlpTrainConfig& config) {
  const int n = static_cast<int>(inputs.cols());
  if (n == 0 || targets.cols() != n) {
    throw ValidationError(ErrorCode::DimensionMismatch,
                          "training inputs/targets column mismatch");
  }
  AdamOptimizer optimizer(model, config.learning_rate);

  std::mt19937_64 rng(config.seed);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  const bool has_holdout = holdout_inputs.cols() > 0;
  double best_monitor = std::numeric_limits<double>::infinity();
  std::vector<Eigen::MatrixXd> best_w = model.weights();
  std::vector<Eigen::VectorXd> best_b = model.biases();
  int since_best = 0;

  MlpTrainReport report;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (int start = 0; start < n; start += config.batch_size) {
      const int bs = std::min(config.batch_size, n - start);
      Eigen::MatrixXd xb(inputs.rows(), bs), yb(targets.rows(), bs);
      for (int k = 0; k < bs; ++k) {
        xb.col(k) = inputs.col(order[start + k]);
        yb.col(k) = targets.col(order[start + k]);
      }

      const auto activations = mlp_forward_cached(model, xb);
      const Eigen::MatrixXd err = activations.back() - yb;
      epoch_loss += err.squaredNorm();
      optimizer.step(model, mlp_backward(model, activations, (2.0 / bs) * err));
    }
    epoch_loss /= n;
    if (!std::isfinite(epoch_loss)) {
      throw RuntimeFailure(ErrorCode::TrainingFailure,
                           "training diverged (non-finite loss) at epoch " +
                               std::to_string(epoch));
    }
    report.epochs_run = epoch + 1;
    report.final_train_mse = epoch_loss;

    const double monitor =
        has_holdout ? mse(model, holdout_inputs, holdout_targets) : epoch_loss;
    if (monitor < best_monitor * (1.0 - 1e-6)) {
      best_monitor = monitor;
      best_w = model.weights();
      best_b = model.biases();
      since_best = 0;
    } else if (config.patience > 0 && ++since_best >= config.patience) {
      break;
    }
  }

  model.weights() = best_w;
  model.biases() = best_b;
  if (has_holdout) {
    report.holdout_mse = mse(model, holdout_inputs, holdout_targets);
    report.holdout_mae =
        (model.forward(holdout_inputs) - holdout_targets).cwiseAbs().mean();
  }
  return report;
}

}  // namespace rigforge
