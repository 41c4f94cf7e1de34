#include "imbalance/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "imbalance/error.hpp"
#include "imbalance/simd/kernels.hpp"

namespace imbalance::neighbors {

NeighborIndex::NeighborIndex(std::vector<double> points, std::size_t dim,
                             std::vector<std::size_t> labels)
    : points_(std::move(points)), dim_(dim), n_(dim == 0 ? 0 : points_.size() / dim),
      labels_(std::move(labels)) {
  if (dim_ == 0) throw Error("neighbor index: zero dimension");
  if (points_.size() % dim_ != 0) throw Error("neighbor index: ragged point data");
  if (n_ == 0) throw Error("neighbor index: no points");
  if (!labels_.empty() && labels_.size() != n_) throw Error("neighbor index: label count mismatch");
  if (!std::all_of(points_.begin(), points_.end(), [](double v) { return std::isfinite(v); })) {
    throw Error("neighbor index: non-finite coordinate");
  }
}

NeighborIndex NeighborIndex::from_matrix(const FeatureMatrix& fm) {
  return NeighborIndex(fm.values, fm.cols, fm.labels);
}

NeighborIndex NeighborIndex::from_rows(const FeatureMatrix& fm, std::span<const std::size_t> rows) {
  std::vector<double> points;
  std::vector<std::size_t> labels;
  points.reserve(rows.size() * fm.cols);
  labels.reserve(rows.size());
  for (auto r : rows) {
    const auto row = fm.row(r);
    points.insert(points.end(), row.begin(), row.end());
    labels.push_back(fm.labels[r]);
  }
  return NeighborIndex(std::move(points), fm.cols, std::move(labels));
}

NeighborList NeighborIndex::query(std::span<const double> query, std::size_t k,
                                  std::optional<std::size_t> exclude) const {
  if (query.size() != dim_) {
    throw Error("knn query dimension " + std::to_string(query.size()) + " does not match index dimension " +
                std::to_string(dim_));
  }
  const bool excluding = exclude && *exclude < n_;
  const std::size_t eligible = n_ - (excluding ? 1 : 0);
  if (k == 0) throw Error("knn query: k must be positive");
  if (k > eligible) {
    throw Error("knn query: k = " + std::to_string(k) + " exceeds " + std::to_string(eligible) +
                " eligible points");
  }

  const auto& kern = simd::active();
  std::vector<std::pair<double, std::size_t>> cand;
  cand.reserve(eligible);
  for (std::size_t i = 0; i < n_; ++i) {
    if (excluding && i == *exclude) continue;
    cand.emplace_back(kern.squared_distance(query.data(), points_.data() + i * dim_, dim_), i);
  }
  // (squared distance, index) pairs order exactly as (distance, index) with the tie rule.
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());

  NeighborList out;
  out.indices.reserve(k);
  out.distances.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    out.indices.push_back(cand[j].second);
    out.distances.push_back(std::sqrt(cand[j].first));
  }
  return out;
}

NeighborList NeighborIndex::query_point(std::size_t i, std::size_t k) const {
  if (i >= n_) throw Error("knn query: point index out of range");
  return query(point(i), k, i);
}

NeighborList knn_query(const NeighborIndex& index, std::span<const double> query, std::size_t k,
                       std::optional<std::size_t> exclude) {
  return index.query(query, k, exclude);
}

double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(simd::squared_distance(a, b));
}

}  // namespace imbalance::neighbors
