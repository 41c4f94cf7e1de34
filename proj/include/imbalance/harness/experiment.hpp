#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "imbalance/error.hpp"
#include "imbalance/evalmetrics.hpp"
#include "imbalance/feature_matrix.hpp"
#include "imbalance/harness/config.hpp"
#include "imbalance/resample.hpp"

namespace imbalance::harness {

/// One grid coordinate. `none` cells carry k_percent = 0.
struct CellKey {
  resample::Method method = resample::Method::none;
  FeatureKind representation = FeatureKind::bow;
  ClassifierKind classifier = ClassifierKind::knn;
  double k_percent = 0.0;

  bool operator==(const CellKey&) const = default;
};

/// Report order: k_percent, then method, representation and classifier in
/// their enumeration order.
bool cell_order(const CellKey& a, const CellKey& b);

struct ExperimentCell {
  CellKey key;
  std::uint64_t seed = 0;
  evalmetrics::MetricsReport result;
  double wall_time_ms = 0.0;
  Warnings warnings;
};

/// Every coordinate of the configured grid, in report order. The `none`
/// method appears once per (representation, classifier).
std::vector<CellKey> experiment_grid(const ExperimentConfig& cfg);

/// Stable hash of the master seed and the coordinate; independent of which
/// other coordinates are in the grid.
std::uint64_t cell_seed(std::uint64_t master_seed, const CellKey& key);

struct ClassifierSettings {
  std::size_t knn_k = 5;
  models::SvmParams svm;
  models::FnnParams fnn;
};

ClassifierSettings classifier_settings(const ExperimentConfig& cfg);

/// Oversamples `train` (never `test`), fits the classifier and scores it on
/// `test`. Both matrices must share one class list.
evalmetrics::MetricsReport evaluate_cell(const FeatureMatrix& train, const FeatureMatrix& test,
                                         resample::Method method, double k_percent, ClassifierKind classifier,
                                         const ClassifierSettings& settings,
                                         const resample::ResampleOptions& resample_options, std::uint64_t seed,
                                         Warnings* warnings = nullptr);

/// Loads the inputs, splits once under the master seed, fits vectorizers on
/// the training split and evaluates every grid cell. Cells come back in
/// report order whatever the thread count.
std::vector<ExperimentCell> run_experiment(const ExperimentConfig& cfg);

}  // namespace imbalance::harness
