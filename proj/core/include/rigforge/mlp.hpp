#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace rigforge {

// Small fully-connected network: ReLU hidden layers, linear output.
// Samples are matrix columns. Deterministic given weights.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<int> layer_sizes);

  // He-initialized weights from a seeded generator.
  static Mlp random_init(const std::vector<int>& layer_sizes, uint64_t seed);

  const std::vector<int>& layer_sizes() const { return layer_sizes_; }
  int input_size() const { return layer_sizes_.front(); }
  int output_size() const { return layer_sizes_.back(); }

  Eigen::MatrixXd forward(const Eigen::MatrixXd& input) const;
  Eigen::VectorXd forward(const Eigen::VectorXd& input) const;

  std::vector<Eigen::MatrixXd>& weights() { return weights_; }
  std::vector<Eigen::VectorXd>& biases() { return biases_; }
  const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
  const std::vector<Eigen::VectorXd>& biases() const { return biases_; }

 private:
  std::vector<int> layer_sizes_;
  std::vector<Eigen::MatrixXd> weights_;  // out x in per layer
  std::vector<Eigen::VectorXd> biases_;
};

// Lower-level pieces for custom training loops (losses that couple samples,
// like the velocity term in face training).
struct MlpGradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

// Forward pass keeping layer activations; activations[0] is the input and
// activations.back() the output.
std::vector<Eigen::MatrixXd> mlp_forward_cached(const Mlp& model,
                                                const Eigen::MatrixXd& input);

// Backpropagates an arbitrary dL/d(output) through cached activations.
MlpGradients mlp_backward(const Mlp& model,
                          const std::vector<Eigen::MatrixXd>& activations,
                          const Eigen::MatrixXd& output_grad);

class AdamOptimizer {
 public:
  AdamOptimizer(const Mlp& model, double learning_rate);
  void step(Mlp& model, const MlpGradients& grads);

 private:
  double lr_;
  long t_ = 0;
  std::vector<Eigen::MatrixXd> mw_, vw_;
  std::vector<Eigen::VectorXd> mb_, vb_;
};

struct MlpTrainConfig {
  double learning_rate = 1e-3;
  int batch_size = 256;
  int max_epochs = 2000;
  // Stop after this many epochs without held-out improvement; <= 0 disables.
  int patience = 100;
  uint64_t seed = 0;
};

struct MlpTrainReport {
  double final_train_mse = 0.0;
  double holdout_mse = 0.0;
  double holdout_mae = 0.0;  // mean absolute error per output entry
  int epochs_run = 0;
};

// Minimizes mean squared error with Adam; mini-batches are drawn with a
// seeded shuffle and accumulated in fixed order, so a run is bitwise
// reproducible. holdout_* may be empty (then early stop uses train loss).
// Throws RuntimeFailure(TrainingFailure) on NaN loss.
MlpTrainReport train_mlp(Mlp& model, const Eigen::MatrixXd& inputs,
                         const Eigen::MatrixXd& targets,
                         const Eigen::MatrixXd& holdout_inputs,
                         const Eigen::MatrixXd& holdout_targets,
                         const MlpTrainConfig& config);

}  // namespace rigforge
