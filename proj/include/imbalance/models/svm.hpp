#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imbalance/feature_matrix.hpp"
#include "imbalance/models/prediction.hpp"

namespace imbalance::models {

enum class KernelKind { linear, rbf };

KernelKind parse_kernel(std::string_view name);
std::string_view kernel_name(KernelKind kind) noexcept;

struct SvmParams {
  KernelKind kernel = KernelKind::rbf;
  double gamma = 0.001;
  double lambda = 1e-3;
  std::size_t epochs = 50;
};

double kernel_value(const SvmParams& params, std::span<const double> a, std::span<const double> b);

/// One-vs-rest kernel SVM trained with the kernelized Pegasos stochastic
/// subgradient method. Scorer c is f_c(x) = sum_j coefficients[c][j] * K(sv_j, x).
struct SvmModel {
  SvmParams params;
  std::vector<std::string> classes;
  std::size_t cols = 0;
  std::vector<double> support;                    // support rows, row-major
  std::vector<std::vector<double>> coefficients;  // per class, one per support row
  /// Regularized hinge objective of each class scorer at the end of every epoch.
  std::vector<std::vector<double>> objective_trace;

  std::size_t support_size() const noexcept { return cols == 0 ? 0 : support.size() / cols; }
};

/// Throws when fewer than 2 rows or fewer than 2 populated classes are given.
SvmModel svm_fit(const FeatureMatrix& fm, const SvmParams& params, std::uint64_t seed);

/// Per-class scores for one query, in class order.
std::vector<double> svm_scores(const SvmModel& model, std::span<const double> query);

/// argmax of the per-class scores; ties go to the earlier class.
PredictionVector svm_predict(const SvmModel& model, const FeatureMatrix& queries);

}  // namespace imbalance::models
