#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace imbalance::models {

/// Predicted class per query row, with optional per-class scores
/// (rows x classes, row-major).
struct PredictionVector {
  std::vector<std::size_t> labels;
  std::vector<std::string> classes;
  std::vector<double> scores;

  std::size_t size() const noexcept { return labels.size(); }
  bool has_scores() const noexcept { return !scores.empty(); }
  std::span<const double> score_row(std::size_t i) const {
    return {scores.data() + i * classes.size(), classes.size()};
  }
};

/// Index of the largest value; the first one wins ties.
std::size_t argmax(std::span<const double> values);

}  // namespace imbalance::models
