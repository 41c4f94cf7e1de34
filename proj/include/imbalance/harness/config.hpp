#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imbalance/feature_matrix.hpp"
#include "imbalance/models/fnn.hpp"
#include "imbalance/models/svm.hpp"
#include "imbalance/resample.hpp"
#include "imbalance/textfeat.hpp"

namespace imbalance::harness {

/// Flat `key = value` text: one pair per line, `#` starts a comment,
/// blank lines ignored. Keys keep their first-appearance order.
class KeyValueFile {
 public:
  static KeyValueFile parse(std::string_view content);
  static KeyValueFile load(const std::filesystem::path& path);

  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }
  std::optional<std::string> get(std::string_view key) const;
  void set(std::string key, std::string value);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

enum class ClassifierKind { knn, svm, fnn };

std::string_view classifier_name(ClassifierKind kind) noexcept;
ClassifierKind parse_classifier(std::string_view name);

/// Parses "bow", "tfidf", "embedding" or "numeric".
FeatureKind parse_representation(std::string_view name);

enum class RandomMode { vector, records };

struct ExperimentConfig {
  std::filesystem::path corpus;                   // text input ...
  std::optional<std::filesystem::path> matrix;    // ... or a numeric matrix CSV
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::filesystem::path> stopwords;
  double test_fraction = 0.2;
  bool stratified = false;
  std::vector<double> k_percents = {0.5, 0.75, 1.0};
  std::vector<resample::Method> methods = {resample::Method::none, resample::Method::random,
                                           resample::Method::smote, resample::Method::borderline_smote,
                                           resample::Method::adasyn};
  std::vector<FeatureKind> representations = {FeatureKind::bow, FeatureKind::tfidf};
  std::vector<ClassifierKind> classifiers = {ClassifierKind::knn, ClassifierKind::svm, ClassifierKind::fnn};
  RandomMode random_mode = RandomMode::vector;
  textfeat::Pooling pooling = textfeat::Pooling::sum;
  resample::ResampleOptions resample;
  std::size_t knn_k = 5;
  models::SvmParams svm;
  models::FnnParams fnn;
  std::uint64_t seed = 42;
  std::filesystem::path out_dir = "results";
  bool timing = false;
  std::size_t threads = 1;

  /// Throws ConfigError on inconsistent settings (e.g. the embedding
  /// representation without an embeddings file).
  void validate() const;
};

/// Builds a config from parsed pairs. Relative paths resolve against `base_dir`.
/// Unknown keys and malformed values raise ConfigError.
ExperimentConfig config_from_pairs(const KeyValueFile& kv, const std::filesystem::path& base_dir);

ExperimentConfig load_config(const std::filesystem::path& path);

// Value parsers shared with the synthetic-spec reader. All throw ConfigError.
double parse_real(std::string_view key, std::string_view value);
std::size_t parse_count(std::string_view key, std::string_view value);
bool parse_bool(std::string_view key, std::string_view value);
std::vector<std::string> parse_list(std::string_view value);
std::vector<double> parse_real_list(std::string_view key, std::string_view value);

}  // namespace imbalance::harness
