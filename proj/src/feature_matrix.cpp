#include "imbalance/feature_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "imbalance/error.hpp"

namespace imbalance {

std::string_view feature_kind_name(FeatureKind kind) noexcept {
  switch (kind) {
    case FeatureKind::bow:
      return "bow";
    case FeatureKind::tfidf:
      return "tfidf";
    case FeatureKind::embedding:
      return "embedding";
    case FeatureKind::numeric:
      return "numeric";
  }
  return "unknown";
}

void FeatureMatrix::append_row(std::span<const double> row, std::size_t label) {
  if (row.size() != cols) {
    throw Error("row has " + std::to_string(row.size()) + " columns, matrix has " +
                std::to_string(cols));
  }
  if (label >= classes.size()) throw Error("label index out of range");
  values.insert(values.end(), row.begin(), row.end());
  labels.push_back(label);
}

std::span<double> FeatureMatrix::append_zero_row(std::size_t label) {
  if (label >= classes.size()) throw Error("label index out of range");
  values.resize(values.size() + cols, 0.0);
  labels.push_back(label);
  return row(labels.size() - 1);
}

std::vector<std::vector<std::size_t>> FeatureMatrix::rows_by_class() const {
  std::vector<std::vector<std::size_t>> groups(classes.size());
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
  return groups;
}

void FeatureMatrix::validate() const {
  if (values.size() != labels.size() * cols) throw Error("feature matrix shape mismatch");
  for (auto l : labels) {
    if (l >= classes.size()) throw Error("feature matrix label out of range");
  }
  if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); })) {
    throw Error("feature matrix contains a non-finite entry");
  }
}

corpus::ClassDistribution class_distribution(const FeatureMatrix& fm) {
  corpus::ClassDistribution dist;
  dist.labels = fm.classes;
  dist.counts.assign(fm.classes.size(), 0);
  for (auto l : fm.labels) ++dist.counts[l];
  dist.total = fm.rows();
  return dist;
}

}  // namespace imbalance
