#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace imbalance::evalmetrics {

/// counts[true][predicted] over a fixed class order.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::vector<std::string> classes);

  const std::vector<std::string>& classes() const noexcept { return classes_; }
  std::size_t size() const noexcept { return classes_.size(); }
  std::size_t at(std::size_t truth, std::size_t predicted) const;
  std::size_t total() const noexcept { return total_; }
  std::size_t trace() const noexcept;

  void add(std::size_t truth, std::size_t predicted, std::size_t count = 1);

  /// Builds a matrix from explicit counts (row = true class).
  static ConfusionMatrix from_counts(std::vector<std::string> classes,
                                     const std::vector<std::vector<std::size_t>>& counts);

 private:
  std::vector<std::string> classes_;
  std::vector<std::size_t> counts_;
  std::size_t total_ = 0;
};

/// By class name. Throws on length mismatch or a label outside `class_order`.
ConfusionMatrix confusion(std::span<const std::string> true_labels,
                          std::span<const std::string> predicted_labels,
                          const std::vector<std::string>& class_order);

/// By class index into `class_order`.
ConfusionMatrix confusion(std::span<const std::size_t> true_labels,
                          std::span<const std::size_t> predicted_labels,
                          const std::vector<std::string>& class_order);

struct ClassMetrics {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct MetricsReport {
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  std::vector<ClassMetrics> per_class;
};

/// Accuracy plus macro (unweighted mean over every class in the matrix)
/// precision, recall and F1. Any 0/0 ratio counts as 0. Throws when the
/// matrix is empty.
MetricsReport report(const ConfusionMatrix& cm);

}  // namespace imbalance::evalmetrics
