#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "imbalance/corpus.hpp"
#include "imbalance/feature_matrix.hpp"
#include "imbalance/harness/config.hpp"
#include "imbalance/textfeat.hpp"

namespace imbalance::harness {

struct GaussianClass {
  std::string name;
  std::size_t count = 0;
  std::vector<double> mean;
};

/// Isotropic Gaussian blobs, one per class.
struct SyntheticSpec {
  std::size_t dimension = 2;
  double stddev = 1.0;
  std::uint64_t seed = 0;
  std::vector<GaussianClass> classes;

  /// Throws ConfigError unless every count >= 1, std > 0 and every mean has
  /// `dimension` entries.
  void validate() const;
};

/// Rows grouped by class in spec order, exact counts. Class c draws from its
/// own generator seeded with mix_seed(seed, c).
FeatureMatrix generate_synthetic(const SyntheticSpec& spec);

/// Topic-lexicon sentence generator. Each token comes from the class's own
/// lexicon, another class's lexicon (probability `confusion`) or a shared
/// filler list.
struct CorpusSpec {
  struct Topic {
    std::string name;
    std::size_t count = 0;
    std::vector<std::string> words;  // empty: built-in lexicon for `name`
  };
  std::uint64_t seed = 0;
  std::vector<Topic> classes;
  double topic_rate = 0.45;
  double confusion = 0.15;
  std::size_t min_words = 6;
  std::size_t max_words = 14;
  std::size_t embedding_dim = 32;
  std::optional<std::filesystem::path> embeddings_out;

  void validate() const;
};

struct SyntheticCorpus {
  corpus::Dataset dataset;
  std::vector<std::string> embedding_words;  // file order
  std::vector<std::vector<double>> embedding_vectors;
};

/// Built-in topic names: affiliation, birth, death, education, family,
/// occupation, parenting, personal_events, professional_events, residence.
const std::vector<std::string>& builtin_topic_words(const std::string& topic);

SyntheticCorpus generate_corpus(const CorpusSpec& spec);

/// word2vec text format with a "count dim" header, 6 decimals per value.
std::string format_embeddings(const SyntheticCorpus& corpus);

/// Either spec kind, as read from a key-value file.
struct SynthFile {
  enum class Kind { gaussian, corpus } kind = Kind::gaussian;
  SyntheticSpec gaussian;
  CorpusSpec corpus;
};

/// Keys: kind (gaussian|corpus), seed, class.<name>.count, plus
/// gaussian: dimension, std, class.<name>.mean;
/// corpus: confusion, topic_rate, min_words, max_words, embedding_dim,
/// embeddings_out, class.<name>.words.
SynthFile synth_from_pairs(const KeyValueFile& kv);
SynthFile load_synth_spec(const std::filesystem::path& path);

/// Writes the generated data to `out` (matrix CSV or corpus TSV). A relative
/// embeddings_out is resolved against the directory of `out`.
void run_synth(const SynthFile& spec, const std::filesystem::path& out);

}  // namespace imbalance::harness
