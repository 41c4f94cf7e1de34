#include "imbalance/evalmetrics.hpp"

#include <algorithm>

#include "imbalance/error.hpp"

namespace imbalance::evalmetrics {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::size_t position(const std::vector<std::string>& order, std::string_view label) {
  const auto it = std::find(order.begin(), order.end(), label);
  if (it == order.end()) throw Error("label '" + std::string(label) + "' is not in the class order");
  return static_cast<std::size_t>(it - order.begin());
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> classes)
    : classes_(std::move(classes)), counts_(classes_.size() * classes_.size(), 0) {}

std::size_t ConfusionMatrix::at(std::size_t truth, std::size_t predicted) const {
  if (truth >= size() || predicted >= size()) throw Error("confusion matrix index out of range");
  return counts_[truth * size() + predicted];
}

std::size_t ConfusionMatrix::trace() const noexcept {
  std::size_t t = 0;
  for (std::size_t i = 0; i < size(); ++i) t += counts_[i * size() + i];
  return t;
}

void ConfusionMatrix::add(std::size_t truth, std::size_t predicted, std::size_t count) {
  if (truth >= size() || predicted >= size()) throw Error("confusion matrix index out of range");
  counts_[truth * size() + predicted] += count;
  total_ += count;
}

ConfusionMatrix ConfusionMatrix::from_counts(std::vector<std::string> classes,
                                             const std::vector<std::vector<std::size_t>>& counts) {
  ConfusionMatrix cm(std::move(classes));
  if (counts.size() != cm.size()) throw Error("confusion counts: wrong row count");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i].size() != cm.size()) throw Error("confusion counts: wrong column count");
    for (std::size_t j = 0; j < counts[i].size(); ++j) cm.add(i, j, counts[i][j]);
  }
  return cm;
}

ConfusionMatrix confusion(std::span<const std::string> true_labels, std::span<const std::string> predicted_labels,
                          const std::vector<std::string>& class_order) {
  if (true_labels.size() != predicted_labels.size()) throw Error("confusion: label sequences differ in length");
  ConfusionMatrix cm(class_order);
  for (std::size_t i = 0; i < true_labels.size(); ++i) {
    cm.add(position(class_order, true_labels[i]), position(class_order, predicted_labels[i]));
  }
  return cm;
}

ConfusionMatrix confusion(std::span<const std::size_t> true_labels, std::span<const std::size_t> predicted_labels,
                          const std::vector<std::string>& class_order) {
  if (true_labels.size() != predicted_labels.size()) throw Error("confusion: label sequences differ in length");
  ConfusionMatrix cm(class_order);
  for (std::size_t i = 0; i < true_labels.size(); ++i) cm.add(true_labels[i], predicted_labels[i]);
  return cm;
}

MetricsReport report(const ConfusionMatrix& cm) {
  if (cm.total() == 0 || cm.size() == 0) throw Error("metrics report: empty confusion matrix");
  const std::size_t n = cm.size();
  MetricsReport r;
  r.accuracy = ratio(cm.trace(), cm.total());
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t predicted = 0;
    std::size_t actual = 0;
    for (std::size_t k = 0; k < n; ++k) {
      predicted += cm.at(k, c);
      actual += cm.at(c, k);
    }
    const std::size_t tp = cm.at(c, c);
    ClassMetrics m;
    m.label = cm.classes()[c];
    m.precision = ratio(tp, predicted);
    m.recall = ratio(tp, actual);
    m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    m.support = actual;
    r.macro_precision += m.precision;
    r.macro_recall += m.recall;
    r.macro_f1 += m.f1;
    r.per_class.push_back(std::move(m));
  }
  r.macro_precision /= static_cast<double>(n);
  r.macro_recall /= static_cast<double>(n);
  r.macro_f1 /= static_cast<double>(n);
  return r;
}

}  // namespace imbalance::evalmetrics
