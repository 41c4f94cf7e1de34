#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "imbalance/feature_matrix.hpp"
#include "imbalance/models/prediction.hpp"
#include "imbalance/neighbors.hpp"

namespace imbalance::models {

/// Lazy k-nearest-neighbor classifier.
struct KnnModel {
  neighbors::NeighborIndex index;
  std::size_t k;
  std::vector<std::string> classes;
};

/// Stores the training rows verbatim. Throws when k is 0 or exceeds the row count.
KnnModel knn_fit(const FeatureMatrix& fm, std::size_t k = 5);

/// Majority vote over the k nearest training rows. A tie between classes is
/// resolved in favor of the tied class whose member appears nearest.
/// Scores are vote fractions.
PredictionVector knn_predict(const KnnModel& model, const FeatureMatrix& queries);

std::size_t knn_predict_one(const KnnModel& model, std::span<const double> query);

}  // namespace imbalance::models
