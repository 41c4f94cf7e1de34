#pragma once

// Class rebalancing by oversampling.
//
// All synthesizers share one loop: pick a base sample s of a minority class,
// pick s' among its same-class nearest neighbors, emit s + alpha (s' - s) with
// alpha uniform on [0, 1], and repeat until the class quota is met. The
// methods differ only in how s is chosen:
//
//   smote             uniformly from the whole class
//   borderline-smote  uniformly from the class's "danger" rows
//   adasyn            per-row budgets proportional to the share of
//                     other-class rows among each row's neighbors
//
// Quotas follow Size_n = floor((M - CurrentSize_n) * k), M the largest class.
// Every class is generated from its own sub-seed mixed from the master seed
// and the class index, so outputs do not depend on generation order.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imbalance/corpus.hpp"
#include "imbalance/error.hpp"
#include "imbalance/feature_matrix.hpp"
#include "imbalance/neighbors.hpp"

namespace imbalance::resample {

/// Per-class synthetic-sample quotas, aligned with `labels`.
struct ResamplePlan {
  std::vector<std::string> labels;
  std::vector<std::size_t> quotas;
  double k_percent = 0.0;
  std::size_t majority_size = 0;

  /// Quota for `label`, 0 when the label is unknown.
  std::size_t quota(std::string_view label) const noexcept;
  std::size_t total() const noexcept;
};

/// Quotas floor((M - count) * k_percent). Throws on an empty distribution or
/// k_percent outside [0, 1].
ResamplePlan target_sizes(const corpus::ClassDistribution& dist, double k_percent);

/// One application of s + alpha (s' - s).
struct InterpolationDraw {
  std::span<const double> base;
  std::span<const double> neighbor;
  double alpha = 0.0;
};

/// Throws on dimension mismatch or alpha outside [0, 1].
std::vector<double> interpolate(const InterpolationDraw& draw);

/// How a synthetic row was produced.
struct Provenance {
  std::size_t base = 0;                   // input row index of s
  std::optional<std::size_t> neighbor;    // input row index of s'; empty for duplicates
  double alpha = 0.0;
};

/// Input rows first (unchanged), synthetic rows appended after them.
struct OversampledMatrix {
  FeatureMatrix matrix;
  std::vector<bool> synthetic_mask;
  std::vector<Provenance> provenance;  // one entry per synthetic row, in row order
  Warnings warnings;

  std::size_t original_rows() const noexcept { return matrix.rows() - provenance.size(); }
};

enum class Method { none, random, smote, borderline_smote, adasyn };

std::string_view method_name(Method m) noexcept;

/// Parses "none", "random", "smote", "borderline-smote" or "adasyn".
Method parse_method(std::string_view name);

/// Duplicates uniformly drawn rows of each class (with replacement).
OversampledMatrix random_oversample(const FeatureMatrix& fm, const ResamplePlan& plan,
                                    std::uint64_t seed);

/// Same policy at the record level; duplicates are appended after the input records.
corpus::Dataset random_oversample_records(const corpus::Dataset& ds, const ResamplePlan& plan,
                                          std::uint64_t seed);

OversampledMatrix smote(const FeatureMatrix& fm, const ResamplePlan& plan,
                        std::size_t k_neighbors, std::uint64_t seed);

enum class BoundaryTag { safe, danger, noise };

std::string_view boundary_tag_name(BoundaryTag tag) noexcept;

/// Tags `row` by m' = number of its m nearest rows (any class, self
/// excluded) whose label differs: noise if m' = m, danger if m/2 <= m' < m,
/// safe otherwise.
BoundaryTag classify_boundary(const FeatureMatrix& fm, std::size_t row, std::size_t m_neighbors);

/// Same, reusing a whole-set index built from `fm` (rows and index points coincide).
BoundaryTag classify_boundary(const neighbors::NeighborIndex& whole_set, std::size_t row,
                              std::size_t m_neighbors);

OversampledMatrix borderline_smote(const FeatureMatrix& fm, const ResamplePlan& plan,
                                   std::size_t m_neighbors, std::size_t k_neighbors,
                                   std::uint64_t seed);

/// Split of `budget` proportionally to `weights`: each share is rounded
/// half-up, then a shortfall or excess is corrected one unit at a time on the
/// rows with the largest (resp. smallest) rounding residual. The result sums
/// to `budget` and equals largest-remainder apportionment with ties to the
/// lower index.
/// Throws when all weights are zero.
std::vector<std::size_t> adasyn_allocation(std::span<const std::size_t> weights, std::size_t budget);

OversampledMatrix adasyn(const FeatureMatrix& fm, const ResamplePlan& plan,
                         std::size_t k_neighbors, std::uint64_t seed);

/// Parameters shared by the method dispatcher.
struct ResampleOptions {
  std::size_t k_neighbors = 5;
  std::size_t m_neighbors = 5;
};

/// Runs `method` (Method::none returns the input with an all-false mask).
OversampledMatrix oversample(Method method, const FeatureMatrix& fm, const ResamplePlan& plan,
                             std::uint64_t seed, const ResampleOptions& options = {});

}  // namespace imbalance::resample
