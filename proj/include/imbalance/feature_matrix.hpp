#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imbalance/corpus.hpp"

namespace imbalance {

enum class FeatureKind { bow, tfidf, embedding, numeric };

std::string_view feature_kind_name(FeatureKind kind) noexcept;

/// Dense row-major sample matrix with a parallel label column.
///
/// Labels are indices into `classes`, which fixes the class order used by
/// every resampler, classifier and metric downstream.
struct FeatureMatrix {
  std::size_t cols = 0;
  std::vector<double> values;
  std::vector<std::size_t> labels;
  std::vector<std::string> classes;
  FeatureKind kind = FeatureKind::numeric;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t cols, std::vector<std::string> classes, FeatureKind kind)
      : cols(cols), classes(std::move(classes)), kind(kind) {}

  std::size_t rows() const noexcept { return labels.size(); }
  bool empty() const noexcept { return labels.empty(); }

  std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
  std::span<double> row(std::size_t i) { return {values.data() + i * cols, cols}; }

  /// Appends a row; `label` must index into `classes`.
  void append_row(std::span<const double> row, std::size_t label);

  /// Appends a zero row and returns it for filling in place.
  std::span<double> append_zero_row(std::size_t label);

  /// Row indices grouped by class, in row order.
  std::vector<std::vector<std::size_t>> rows_by_class() const;

  /// Throws imbalance::Error when shapes disagree, a label is out of range,
  /// or an entry is not finite.
  void validate() const;

  bool operator==(const FeatureMatrix&) const = default;
};

corpus::ClassDistribution class_distribution(const FeatureMatrix& fm);

}  // namespace imbalance
