#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace imbalance::corpus {

/// One labeled sentence.
struct LabeledRecord {
  std::string text;
  std::string label;

  bool operator==(const LabeledRecord&) const = default;
};

/// Ordered records plus the ordered set of class labels.
///
/// Classes are kept in first-appearance order. A dataset may also carry
/// classes that currently have no records (e.g. one side of a split), so
/// downstream counts stay aligned with the source corpus.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<LabeledRecord> records);
  Dataset(std::vector<LabeledRecord> records, std::vector<std::string> classes);

  /// Appends a record, registering its label if new. Rejects blank text or label.
  void add(LabeledRecord record);

  const std::vector<LabeledRecord>& records() const noexcept { return records_; }
  const std::vector<std::string>& classes() const noexcept { return classes_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  /// Position of `label` in classes(), or classes().size() when absent.
  std::size_t class_index(std::string_view label) const noexcept;

 private:
  void register_class(const std::string& label);

  std::vector<LabeledRecord> records_;
  std::vector<std::string> classes_;
};

/// Per-class counts, aligned with a class list.
struct ClassDistribution {
  std::vector<std::string> labels;
  std::vector<std::size_t> counts;
  std::size_t total = 0;

  /// Count for `label`, 0 when the label is unknown.
  std::size_t count(std::string_view label) const noexcept;
};

/// Parses a `label<TAB>text` corpus file. Blank lines are skipped.
Dataset load_corpus(const std::filesystem::path& path);

/// Same format, from an in-memory buffer.
Dataset parse_corpus(std::string_view content);

/// Writes the corpus in the format load_corpus reads.
void save_corpus(const Dataset& ds, const std::filesystem::path& path);

ClassDistribution class_distribution(const Dataset& ds);

struct SplitResult {
  Dataset train;
  Dataset test;
};

struct IndexSplit {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

/// Index-level split of items with class ids `class_of` (values < num_classes).
/// Same rules as split(); used for both corpora and numeric matrices.
IndexSplit split_indices(std::span<const std::size_t> class_of, std::size_t num_classes,
                         double test_fraction, std::uint64_t seed, bool stratified = false);

/// Seeded shuffle split. |test| = round-half-up(test_fraction * |ds|).
/// With `stratified`, the rounding is applied per class instead.
/// Both halves keep the parent's class list and relative record order.
SplitResult split(const Dataset& ds, double test_fraction, std::uint64_t seed,
                  bool stratified = false);

}  // namespace imbalance::corpus
