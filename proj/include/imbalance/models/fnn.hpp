#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "imbalance/feature_matrix.hpp"
#include "imbalance/models/prediction.hpp"

namespace imbalance::models {

struct FnnParams {
  std::vector<std::size_t> hidden = {64};
  std::size_t epochs = 50;
  double learning_rate = 1e-3;
  std::size_t batch_size = 8;
  double dropout = 0.5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Fully connected layer; weights are outputs x inputs, row-major.
struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  std::span<const double> weight_row(std::size_t o) const { return {weights.data() + o * inputs, inputs}; }
  std::span<double> weight_row(std::size_t o) { return {weights.data() + o * inputs, inputs}; }
};

/// Per-sample multiplicative masks for each hidden layer (samples x units,
/// row-major). Entries are 0 or 1 / (1 - dropout) under inverted dropout.
using DropoutMasks = std::vector<std::vector<double>>;

/// Sigmoid hidden layers, softmax output, trained on mean cross-entropy with Adam.
class FnnModel {
 public:
  FnnModel() = default;

  /// Weights drawn from U(-1/sqrt(fan_in), 1/sqrt(fan_in)); biases zero.
  FnnModel(std::size_t inputs, std::vector<std::string> classes, FnnParams params, std::uint64_t seed);

  const FnnParams& params() const noexcept { return params_; }
  const std::vector<std::string>& classes() const noexcept { return classes_; }
  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  std::vector<DenseLayer>& layers() noexcept { return layers_; }
  std::size_t inputs() const noexcept { return layers_.empty() ? 0 : layers_.front().inputs; }

  std::size_t parameter_count() const noexcept;
  /// Parameters flattened layer by layer (weights then bias).
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> flat);

  /// Softmax probabilities for one input, dropout disabled.
  std::vector<double> predict_proba(std::span<const double> x) const;

  /// Mean cross-entropy over `rows` of `data` and its gradient (same layout
  /// as parameters()). `masks`, when given, holds one mask matrix per hidden
  /// layer with one row per entry of `rows`.
  double loss_and_gradient(const FeatureMatrix& data, std::span<const std::size_t> rows,
                           const DropoutMasks* masks, std::vector<double>* gradient) const;

  /// One Adam step with a precomputed gradient.
  void adam_step(std::span<const double> gradient);

  /// Runs the configured number of epochs of shuffled minibatch training.
  void train(const FeatureMatrix& data, std::uint64_t seed);

  std::size_t adam_steps() const noexcept { return step_; }

 private:
  FnnParams params_;
  std::vector<std::string> classes_;
  std::vector<DenseLayer> layers_;
  std::vector<double> adam_m_;
  std::vector<double> adam_v_;
  std::size_t step_ = 0;
};

/// Throws on fewer than 2 populated classes or a zero hidden size.
FnnModel fnn_fit(const FeatureMatrix& fm, const FnnParams& params, std::uint64_t seed);

/// Forward pass without dropout; argmax of softmax, ties to the earlier class.
PredictionVector fnn_predict(const FnnModel& model, const FeatureMatrix& queries);

}  // namespace imbalance::models
