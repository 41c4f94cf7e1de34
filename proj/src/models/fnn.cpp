#include "imbalance/models/fnn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "imbalance/error.hpp"
#include "imbalance/rng.hpp"
#include "imbalance/simd/kernels.hpp"

namespace imbalance::models {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// In-place softmax; returns log-sum-exp of the input.
double softmax(std::span<double> z) {
  const double top = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (auto& v : z) {
    v = std::exp(v - top);
    sum += v;
  }
  for (auto& v : z) v /= sum;
  return top + std::log(sum);
}

void dense_forward(const DenseLayer& layer, std::span<const double> in, std::span<double> out) {
  for (std::size_t o = 0; o < layer.outputs; ++o) {
    out[o] = simd::dot(layer.weight_row(o), in) + layer.bias[o];
  }
}

}  // namespace

FnnModel::FnnModel(std::size_t inputs, std::vector<std::string> classes, FnnParams params, std::uint64_t seed)
    : params_(std::move(params)), classes_(std::move(classes)) {
  if (inputs == 0) throw Error("fnn: input dimension must be positive");
  if (classes_.size() < 2) throw Error("fnn: need at least 2 classes");
  if (std::any_of(params_.hidden.begin(), params_.hidden.end(), [](std::size_t h) { return h == 0; })) {
    throw Error("fnn: hidden layer sizes must be positive");
  }
  if (params_.batch_size == 0) throw Error("fnn: batch size must be positive");
  if (!(params_.dropout >= 0.0 && params_.dropout < 1.0)) throw Error("fnn: dropout must lie in [0, 1)");

  Rng rng(seed);
  std::size_t fan_in = inputs;
  std::vector<std::size_t> widths = params_.hidden;
  widths.push_back(classes_.size());
  for (auto width : widths) {
    DenseLayer layer;
    layer.inputs = fan_in;
    layer.outputs = width;
    layer.weights.resize(fan_in * width);
    layer.bias.assign(width, 0.0);
    const double limit = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (auto& w : layer.weights) w = rng.uniform(-limit, limit);
    layers_.push_back(std::move(layer));
    fan_in = width;
  }
  adam_m_.assign(parameter_count(), 0.0);
  adam_v_.assign(parameter_count(), 0.0);
}

std::size_t FnnModel::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weights.size() + l.bias.size();
  return n;
}

std::vector<double> FnnModel::parameters() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const auto& l : layers_) {
    flat.insert(flat.end(), l.weights.begin(), l.weights.end());
    flat.insert(flat.end(), l.bias.begin(), l.bias.end());
  }
  return flat;
}

void FnnModel::set_parameters(std::span<const double> flat) {
  if (flat.size() != parameter_count()) throw Error("fnn: parameter vector has the wrong length");
  auto it = flat.begin();
  for (auto& l : layers_) {
    std::copy_n(it, l.weights.size(), l.weights.begin());
    it += static_cast<std::ptrdiff_t>(l.weights.size());
    std::copy_n(it, l.bias.size(), l.bias.begin());
    it += static_cast<std::ptrdiff_t>(l.bias.size());
  }
}

std::vector<double> FnnModel::predict_proba(std::span<const double> x) const {
  if (x.size() != inputs()) throw Error("fnn: input dimension mismatch");
  std::vector<double> in(x.begin(), x.end());
  std::vector<double> out;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    out.assign(layers_[l].outputs, 0.0);
    dense_forward(layers_[l], in, out);
    if (l + 1 < layers_.size()) {
      for (auto& v : out) v = sigmoid(v);
    }
    in.swap(out);
  }
  softmax(in);
  return in;
}

double FnnModel::loss_and_gradient(const FeatureMatrix& data, std::span<const std::size_t> rows,
                                   const DropoutMasks* masks, std::vector<double>* gradient) const {
  if (data.cols != inputs()) throw Error("fnn: input dimension mismatch");
  if (rows.empty()) throw Error("fnn: empty batch");
  const std::size_t hidden_layers = layers_.size() - 1;
  if (masks != nullptr) {
    if (masks->size() != hidden_layers) throw Error("fnn: one dropout mask per hidden layer expected");
    for (std::size_t l = 0; l < hidden_layers; ++l) {
      if ((*masks)[l].size() != rows.size() * layers_[l].outputs) throw Error("fnn: dropout mask shape mismatch");
    }
  }

  // Gradient views per layer into the flat buffer.
  std::vector<std::span<double>> grad_w;
  std::vector<std::span<double>> grad_b;
  if (gradient != nullptr) {
    gradient->assign(parameter_count(), 0.0);
    double* p = gradient->data();
    for (const auto& l : layers_) {
      grad_w.emplace_back(p, l.weights.size());
      p += l.weights.size();
      grad_b.emplace_back(p, l.bias.size());
      p += l.bias.size();
    }
  }

  const double inv_batch = 1.0 / static_cast<double>(rows.size());
  std::vector<std::vector<double>> sig(hidden_layers);   // sigmoid outputs before masking
  std::vector<std::vector<double>> act(layers_.size());  // inputs fed to each layer
  std::vector<double> delta;
  std::vector<double> back;
  double loss = 0.0;

  for (std::size_t s = 0; s < rows.size(); ++s) {
    const std::size_t r = rows[s];
    const std::size_t label = data.labels[r];
    if (label >= classes_.size()) throw Error("fnn: label out of range");
    const auto x = data.row(r);
    act[0].assign(x.begin(), x.end());
    for (std::size_t l = 0; l < hidden_layers; ++l) {
      sig[l].assign(layers_[l].outputs, 0.0);
      dense_forward(layers_[l], act[l], sig[l]);
      for (auto& v : sig[l]) v = sigmoid(v);
      act[l + 1] = sig[l];
      if (masks != nullptr) {
        const double* m = (*masks)[l].data() + s * layers_[l].outputs;
        for (std::size_t u = 0; u < act[l + 1].size(); ++u) act[l + 1][u] *= m[u];
      }
    }
    const auto& out_layer = layers_.back();
    delta.assign(out_layer.outputs, 0.0);
    dense_forward(out_layer, act[hidden_layers], delta);
    const double z_label = delta[label];
    const double lse = softmax(delta);
    loss += (lse - z_label) * inv_batch;
    if (gradient == nullptr) continue;

    // dL/dz at the output: (p - onehot) / B
    delta[label] -= 1.0;
    for (auto& d : delta) d *= inv_batch;
    for (std::size_t l = layers_.size(); l-- > 0;) {
      const auto& layer = layers_[l];
      const std::span<const double> in = act[l];
      for (std::size_t o = 0; o < layer.outputs; ++o) {
        simd::axpy(delta[o], in, grad_w[l].subspan(o * layer.inputs, layer.inputs));
        grad_b[l][o] += delta[o];
      }
      if (l == 0) break;
      back.assign(layer.inputs, 0.0);
      for (std::size_t o = 0; o < layer.outputs; ++o) simd::axpy(delta[o], layer.weight_row(o), back);
      const std::size_t h = l - 1;
      const double* m = masks != nullptr ? (*masks)[h].data() + s * layers_[h].outputs : nullptr;
      for (std::size_t u = 0; u < back.size(); ++u) {
        const double sv = sig[h][u];
        back[u] *= sv * (1.0 - sv) * (m != nullptr ? m[u] : 1.0);
      }
      delta.swap(back);
    }
  }
  return loss;
}

void FnnModel::adam_step(std::span<const double> gradient) {
  if (gradient.size() != parameter_count()) throw Error("fnn: gradient has the wrong length");
  ++step_;
  const double t = static_cast<double>(step_);
  const double correction1 = 1.0 - std::pow(params_.beta1, t);
  const double correction2 = 1.0 - std::pow(params_.beta2, t);
  std::size_t k = 0;
  auto update = [&](std::vector<double>& values) {
    for (auto& w : values) {
      const double g = gradient[k];
      adam_m_[k] = params_.beta1 * adam_m_[k] + (1.0 - params_.beta1) * g;
      adam_v_[k] = params_.beta2 * adam_v_[k] + (1.0 - params_.beta2) * g * g;
      const double m_hat = adam_m_[k] / correction1;
      const double v_hat = adam_v_[k] / correction2;
      w -= params_.learning_rate * m_hat / (std::sqrt(v_hat) + params_.epsilon);
      ++k;
    }
  };
  for (auto& l : layers_) {
    update(l.weights);
    update(l.bias);
  }
}

void FnnModel::train(const FeatureMatrix& data, std::uint64_t seed) {
  if (data.cols != inputs()) throw Error("fnn: input dimension mismatch");
  Rng rng(seed);
  std::vector<std::size_t> order(data.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t hidden_layers = layers_.size() - 1;
  const double keep_scale = 1.0 / (1.0 - params_.dropout);
  DropoutMasks masks(hidden_layers);
  std::vector<double> gradient;

  for (std::size_t epoch = 0; epoch < params_.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.uniform_index(i)]);
    for (std::size_t start = 0; start < order.size(); start += params_.batch_size) {
      const std::size_t count = std::min(params_.batch_size, order.size() - start);
      const std::span<const std::size_t> batch(order.data() + start, count);
      for (std::size_t l = 0; l < hidden_layers; ++l) {
        masks[l].resize(count * layers_[l].outputs);
        for (auto& m : masks[l]) m = params_.dropout > 0.0 && rng.uniform(0.0, 1.0) < params_.dropout ? 0.0 : keep_scale;
      }
      loss_and_gradient(data, batch, &masks, &gradient);
      adam_step(gradient);
    }
  }
}

FnnModel fnn_fit(const FeatureMatrix& fm, const FnnParams& params, std::uint64_t seed) {
  fm.validate();
  if (fm.empty()) throw Error("fnn_fit: empty training matrix");
  const auto dist = class_distribution(fm);
  if (std::count_if(dist.counts.begin(), dist.counts.end(), [](std::size_t c) { return c > 0; }) < 2) {
    throw Error("fnn_fit: training data must contain at least 2 classes");
  }
  FnnModel model(fm.cols, fm.classes, params, mix_seed(seed, 0));
  model.train(fm, mix_seed(seed, 1));
  return model;
}

PredictionVector fnn_predict(const FnnModel& model, const FeatureMatrix& queries) {
  if (queries.cols != model.inputs()) throw Error("fnn_predict: query dimension mismatch");
  PredictionVector out;
  out.classes = model.classes();
  out.labels.reserve(queries.rows());
  for (std::size_t i = 0; i < queries.rows(); ++i) {
    const auto p = model.predict_proba(queries.row(i));
    out.labels.push_back(argmax(p));
    out.scores.insert(out.scores.end(), p.begin(), p.end());
  }
  return out;
}

}  // namespace imbalance::models
