#include "imbalance/models/knn.hpp"

#include <algorithm>

#include "imbalance/error.hpp"

namespace imbalance::models {

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw Error("argmax of an empty range");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

KnnModel knn_fit(const FeatureMatrix& fm, std::size_t k) {
  if (fm.empty()) throw Error("knn_fit: empty training matrix");
  if (k == 0) throw Error("knn_fit: k must be positive");
  if (k > fm.rows()) {
    throw Error("knn_fit: k = " + std::to_string(k) + " exceeds " + std::to_string(fm.rows()) + " rows");
  }
  fm.validate();
  return KnnModel{neighbors::NeighborIndex::from_matrix(fm), k, fm.classes};
}

namespace {

std::size_t vote(const KnnModel& model, std::span<const double> query, std::vector<std::size_t>& counts) {
  const auto list = model.index.query(query, model.k);
  std::fill(counts.begin(), counts.end(), 0);
  for (auto i : list.indices) ++counts[model.index.labels()[i]];
  const std::size_t top = *std::max_element(counts.begin(), counts.end());
  // Neighbors come nearest first, so the first member of a tied class wins.
  for (auto i : list.indices) {
    const auto label = model.index.labels()[i];
    if (counts[label] == top) return label;
  }
  return model.index.labels()[list.indices.front()];
}

}  // namespace

std::size_t knn_predict_one(const KnnModel& model, std::span<const double> query) {
  std::vector<std::size_t> counts(model.classes.size());
  return vote(model, query, counts);
}

PredictionVector knn_predict(const KnnModel& model, const FeatureMatrix& queries) {
  if (queries.cols != model.index.dim()) throw Error("knn_predict: query dimension mismatch");
  PredictionVector out;
  out.classes = model.classes;
  out.labels.reserve(queries.rows());
  out.scores.reserve(queries.rows() * model.classes.size());
  std::vector<std::size_t> counts(model.classes.size());
  for (std::size_t i = 0; i < queries.rows(); ++i) {
    out.labels.push_back(vote(model, queries.row(i), counts));
    for (auto c : counts) out.scores.push_back(static_cast<double>(c) / static_cast<double>(model.k));
  }
  return out;
}

}  // namespace imbalance::models
