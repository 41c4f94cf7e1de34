#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "imbalance/error.hpp"
#include "imbalance/feature_matrix.hpp"

namespace imbalance::textfeat {

/// Lowercase word tokens of one sentence, in order.
struct TokenizedText {
  std::vector<std::string> tokens;

  bool operator==(const TokenizedText&) const = default;
};

using StopwordSet = std::unordered_set<std::string>;

/// Splits UTF-8 text into maximal runs of letters and digits, lowercased.
/// Everything else (punctuation, whitespace, hyphens, symbols) separates tokens.
/// Letter classification and case folding cover Latin, Greek, Cyrillic,
/// Armenian and Georgian; other scripts' letters are kept unchanged.
TokenizedText tokenize(std::string_view text);

/// Token index fitted on a training collection.
class Vocabulary {
 public:
  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }

  /// Column of `token`, or nullopt for out-of-vocabulary tokens.
  std::optional<std::size_t> index_of(std::string_view token) const;

  const std::string& token(std::size_t column) const { return tokens_.at(column); }
  std::size_t document_frequency(std::size_t column) const { return df_.at(column); }
  std::size_t num_documents() const noexcept { return num_documents_; }
  const StopwordSet& stopwords() const noexcept { return stopwords_; }

  /// Smooth inverse document frequency ln((1 + N) / (1 + df)) + 1.
  double idf(std::size_t column) const;

 private:
  friend Vocabulary build_vocab(std::span<const TokenizedText>, const StopwordSet&);

  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
  std::vector<std::string> tokens_;
  std::vector<std::size_t> df_;
  std::size_t num_documents_ = 0;
  StopwordSet stopwords_;
};

/// Columns in first-appearance order; stopwords never get a column.
/// Throws imbalance::Error when no token survives filtering.
Vocabulary build_vocab(std::span<const TokenizedText> train_texts, const StopwordSet& stopwords = {});

/// Raw term counts. Out-of-vocabulary tokens are ignored.
/// `labels`/`classes` are copied into the result unchanged.
FeatureMatrix bow_matrix(std::span<const TokenizedText> texts, const Vocabulary& vocab,
                         std::vector<std::size_t> labels = {}, std::vector<std::string> classes = {});

/// tf * idf with raw-count tf and smooth idf, each row then L2-normalized.
FeatureMatrix tfidf_matrix(std::span<const TokenizedText> texts, const Vocabulary& vocab,
                           std::vector<std::size_t> labels = {}, std::vector<std::string> classes = {});

/// Word vectors of uniform dimension.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dimension = 300) : dimension_(dimension) {}

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return index_.size(); }
  bool empty() const noexcept { return index_.empty(); }

  /// Inserts or replaces. Returns false when `word` was already present.
  bool insert(std::string word, std::span<const double> vector);

  /// Vector for `word`, or an empty span when absent.
  std::span<const double> find(std::string_view word) const;

 private:
  std::size_t dimension_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
};

/// word2vec text format: optional "count dim" header, then `word v1 ... vdim`.
/// Duplicate words keep the last vector and add a warning.
EmbeddingTable load_embeddings(const std::filesystem::path& path, Warnings* warnings = nullptr);
EmbeddingTable parse_embeddings(std::string_view content, Warnings* warnings = nullptr);

enum class Pooling { sum, mean };

/// Sum of the vectors of all in-table tokens (repeats included); the zero
/// vector when none is found. `Pooling::mean` divides by the found count.
std::vector<double> embed_text(const TokenizedText& text, const EmbeddingTable& table,
                               Pooling pooling = Pooling::sum);

FeatureMatrix embedding_matrix(std::span<const TokenizedText> texts, const EmbeddingTable& table,
                               Pooling pooling = Pooling::sum, std::vector<std::size_t> labels = {},
                               std::vector<std::string> classes = {});

/// One token per line; blank lines ignored; tokens are lowercased.
StopwordSet load_stopwords(const std::filesystem::path& path);

}  // namespace imbalance::textfeat
