#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "imbalance/feature_matrix.hpp"

namespace imbalance::neighbors {

/// Result of a k-nearest-neighbor query, nearest first.
struct NeighborList {
  std::vector<std::size_t> indices;
  std::vector<double> distances;  // Euclidean
};

/// Exact brute-force Euclidean neighbor search over an owned point set.
class NeighborIndex {
 public:
  /// Copies `points` (n x dim, row-major). Throws when n == 0 or entries are not finite.
  NeighborIndex(std::vector<double> points, std::size_t dim, std::vector<std::size_t> labels = {});

  /// Index over all rows of `fm`, carrying its labels.
  static NeighborIndex from_matrix(const FeatureMatrix& fm);

  /// Index over the selected rows of `fm`; point i of the index is fm row `rows[i]`.
  static NeighborIndex from_rows(const FeatureMatrix& fm, std::span<const std::size_t> rows);

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> point(std::size_t i) const { return {points_.data() + i * dim_, dim_}; }
  const std::vector<std::size_t>& labels() const noexcept { return labels_; }

  /// The k points closest to `query`, ties broken by smaller index. `exclude`
  /// drops one index from consideration (the query's own row).
  /// Throws imbalance::Error when k exceeds the eligible point count or the
  /// query dimension differs.
  NeighborList query(std::span<const double> query, std::size_t k,
                     std::optional<std::size_t> exclude = std::nullopt) const;

  /// Neighbors of stored point `i`, excluding itself.
  NeighborList query_point(std::size_t i, std::size_t k) const;

 private:
  std::vector<double> points_;
  std::size_t dim_;
  std::size_t n_;
  std::vector<std::size_t> labels_;
};

/// Free-function form of NeighborIndex::query.
NeighborList knn_query(const NeighborIndex& index, std::span<const double> query, std::size_t k,
                       std::optional<std::size_t> exclude = std::nullopt);

/// Euclidean distance using the active SIMD kernels.
double distance(std::span<const double> a, std::span<const double> b);

}  // namespace imbalance::neighbors
