#include "imbalance/models/svm.hpp"

#include <algorithm>
#include <cmath>

#include "imbalance/error.hpp"
#include "imbalance/rng.hpp"
#include "imbalance/simd/kernels.hpp"

namespace imbalance::models {

namespace {

// Above this many training rows kernel rows are recomputed on demand instead
// of caching the full Gram matrix.
constexpr std::size_t kGramCacheLimit = 4096;

class KernelRows {
 public:
  KernelRows(const FeatureMatrix& fm, const SvmParams& params) : fm_(fm), params_(params), n_(fm.rows()) {
    if (n_ <= kGramCacheLimit) {
      gram_.resize(n_ * n_);
      for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i; j < n_; ++j) {
          const double v = kernel_value(params_, fm_.row(i), fm_.row(j));
          gram_[i * n_ + j] = v;
          gram_[j * n_ + i] = v;
        }
      }
    } else {
      scratch_.resize(n_);
    }
  }

  std::span<const double> row(std::size_t i) {
    if (!gram_.empty()) return {gram_.data() + i * n_, n_};
    for (std::size_t j = 0; j < n_; ++j) scratch_[j] = kernel_value(params_, fm_.row(i), fm_.row(j));
    return scratch_;
  }

 private:
  const FeatureMatrix& fm_;
  const SvmParams& params_;
  std::size_t n_;
  std::vector<double> gram_;
  std::vector<double> scratch_;
};

double objective(double lambda, std::size_t t, std::span<const double> margins_unscaled,
                 std::span<const std::size_t> alpha, std::span<const double> y) {
  const double scale = 1.0 / (lambda * static_cast<double>(t));
  double norm_sq = 0.0;
  double hinge = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    norm_sq += static_cast<double>(alpha[i]) * y[i] * margins_unscaled[i];
    hinge += std::max(0.0, 1.0 - y[i] * scale * margins_unscaled[i]);
  }
  return 0.5 * lambda * scale * scale * norm_sq + hinge / static_cast<double>(y.size());
}

}  // namespace

KernelKind parse_kernel(std::string_view name) {
  if (name == "linear") return KernelKind::linear;
  if (name == "rbf") return KernelKind::rbf;
  throw Error("unknown SVM kernel '" + std::string(name) + "'");
}

std::string_view kernel_name(KernelKind kind) noexcept {
  return kind == KernelKind::linear ? "linear" : "rbf";
}

double kernel_value(const SvmParams& params, std::span<const double> a, std::span<const double> b) {
  if (params.kernel == KernelKind::linear) return simd::dot(a, b);
  return std::exp(-params.gamma * simd::squared_distance(a, b));
}

SvmModel svm_fit(const FeatureMatrix& fm, const SvmParams& params, std::uint64_t seed) {
  fm.validate();
  if (fm.rows() < 2) throw Error("svm_fit: need at least 2 training rows");
  const auto dist = class_distribution(fm);
  if (std::count_if(dist.counts.begin(), dist.counts.end(), [](std::size_t c) { return c > 0; }) < 2) {
    throw Error("svm_fit: training data must contain at least 2 classes");
  }
  if (params.kernel == KernelKind::rbf && !(params.gamma > 0.0)) throw Error("svm_fit: gamma must be positive");
  if (!(params.lambda > 0.0)) throw Error("svm_fit: lambda must be positive");
  if (params.epochs == 0) throw Error("svm_fit: epochs must be positive");

  const std::size_t n = fm.rows();
  const std::size_t steps = params.epochs * n;
  KernelRows kernel(fm, params);

  SvmModel model;
  model.params = params;
  model.classes = fm.classes;
  model.cols = fm.cols;

  std::vector<std::vector<double>> coef(fm.classes.size(), std::vector<double>(n, 0.0));
  std::vector<double> y(n);
  std::vector<double> margins(n);
  std::vector<std::size_t> alpha(n);
  for (std::size_t c = 0; c < fm.classes.size(); ++c) {
    for (std::size_t i = 0; i < n; ++i) y[i] = fm.labels[i] == c ? 1.0 : -1.0;
    std::fill(margins.begin(), margins.end(), 0.0);
    std::fill(alpha.begin(), alpha.end(), 0);
    std::vector<double> trace;
    trace.reserve(params.epochs);

    Rng rng(mix_seed(seed, c));
    for (std::size_t t = 1; t <= steps; ++t) {
      const std::size_t i = rng.uniform_index(n);
      // margins[i] = sum_j alpha_j y_j K(x_j, x_i); the iterate is margins / (lambda t).
      if (y[i] * margins[i] < params.lambda * static_cast<double>(t)) {
        ++alpha[i];
        simd::axpy(y[i], kernel.row(i), margins);
      }
      if (t % n == 0) trace.push_back(objective(params.lambda, t, margins, alpha, y));
    }
    const double scale = 1.0 / (params.lambda * static_cast<double>(steps));
    for (std::size_t j = 0; j < n; ++j) coef[c][j] = static_cast<double>(alpha[j]) * y[j] * scale;
    model.objective_trace.push_back(std::move(trace));
  }

  model.coefficients.assign(fm.classes.size(), {});
  for (std::size_t j = 0; j < n; ++j) {
    const bool used = std::any_of(coef.begin(), coef.end(), [j](const auto& cc) { return cc[j] != 0.0; });
    if (!used) continue;
    const auto row = fm.row(j);
    model.support.insert(model.support.end(), row.begin(), row.end());
    for (std::size_t c = 0; c < coef.size(); ++c) model.coefficients[c].push_back(coef[c][j]);
  }
  return model;
}

std::vector<double> svm_scores(const SvmModel& model, std::span<const double> query) {
  if (query.size() != model.cols) throw Error("svm_predict: query dimension mismatch");
  const std::size_t m = model.support_size();
  std::vector<double> k(m);
  for (std::size_t j = 0; j < m; ++j) {
    k[j] = kernel_value(model.params, {model.support.data() + j * model.cols, model.cols}, query);
  }
  std::vector<double> scores(model.classes.size(), 0.0);
  for (std::size_t c = 0; c < scores.size(); ++c) scores[c] = simd::dot(model.coefficients[c], k);
  return scores;
}

PredictionVector svm_predict(const SvmModel& model, const FeatureMatrix& queries) {
  if (queries.cols != model.cols) throw Error("svm_predict: query dimension mismatch");
  PredictionVector out;
  out.classes = model.classes;
  out.labels.reserve(queries.rows());
  for (std::size_t i = 0; i < queries.rows(); ++i) {
    const auto scores = svm_scores(model, queries.row(i));
    out.labels.push_back(argmax(scores));
    out.scores.insert(out.scores.end(), scores.begin(), scores.end());
  }
  return out;
}

}  // namespace imbalance::models
