#include "imbalance/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <mutex>
#include <optional>
#include <thread>
#include <tuple>

#include "imbalance/corpus.hpp"
#include "imbalance/harness/matrix_io.hpp"
#include "imbalance/models/fnn.hpp"
#include "imbalance/models/knn.hpp"
#include "imbalance/models/svm.hpp"
#include "imbalance/rng.hpp"
#include "imbalance/textfeat.hpp"

namespace imbalance::harness {

namespace {

using resample::Method;

std::string describe(const CellKey& key) {
  std::string s = "cell method=" + std::string(resample::method_name(key.method)) +
                  " representation=" + std::string(feature_kind_name(key.representation)) +
                  " classifier=" + std::string(classifier_name(key.classifier));
  if (key.method != Method::none) s += " k=" + format_double(key.k_percent);
  return s;
}

void require_file(const std::filesystem::path& path, const char* what) {
  if (!std::filesystem::is_regular_file(path)) {
    throw ConfigError(std::string(what) + " file not found: " + path.string());
  }
}

std::vector<std::size_t> label_indices(const corpus::Dataset& ds) {
  std::vector<std::size_t> out;
  out.reserve(ds.size());
  for (const auto& r : ds.records()) out.push_back(ds.class_index(r.label));
  return out;
}

std::vector<textfeat::TokenizedText> tokenize_all(const corpus::Dataset& ds) {
  std::vector<textfeat::TokenizedText> out;
  out.reserve(ds.size());
  for (const auto& r : ds.records()) out.push_back(textfeat::tokenize(r.text));
  return out;
}

FeatureMatrix select_rows(const FeatureMatrix& fm, const std::vector<std::size_t>& rows) {
  FeatureMatrix out(fm.cols, fm.classes, fm.kind);
  out.values.reserve(rows.size() * fm.cols);
  for (auto r : rows) out.append_row(fm.row(r), fm.labels[r]);
  return out;
}

// Text inputs shared by every cell: the split, its tokens and the loaded resources.
struct TextInputs {
  corpus::Dataset train;
  corpus::Dataset test;
  std::vector<textfeat::TokenizedText> train_tokens;
  std::vector<textfeat::TokenizedText> test_tokens;
  textfeat::StopwordSet stopwords;
  std::optional<textfeat::EmbeddingTable> embeddings;
  textfeat::Pooling pooling = textfeat::Pooling::sum;
};

struct MatrixPair {
  FeatureMatrix train;
  FeatureMatrix test;
};

// Vectorizers are fitted on `train_tokens` alone; the test split only passes
// through the fitted vocabulary or table.
MatrixPair vectorize(const TextInputs& in, FeatureKind kind, const corpus::Dataset& train,
                     const std::vector<textfeat::TokenizedText>& train_tokens) {
  auto train_labels = label_indices(train);
  auto test_labels = label_indices(in.test);
  const auto& classes = train.classes();
  switch (kind) {
    case FeatureKind::bow:
    case FeatureKind::tfidf: {
      const auto vocab = textfeat::build_vocab(train_tokens, in.stopwords);
      auto make = kind == FeatureKind::bow ? &textfeat::bow_matrix : &textfeat::tfidf_matrix;
      return {make(train_tokens, vocab, std::move(train_labels), classes),
              make(in.test_tokens, vocab, std::move(test_labels), classes)};
    }
    case FeatureKind::embedding:
      return {textfeat::embedding_matrix(train_tokens, *in.embeddings, in.pooling, std::move(train_labels), classes),
              textfeat::embedding_matrix(in.test_tokens, *in.embeddings, in.pooling, std::move(test_labels),
                                         classes)};
    case FeatureKind::numeric:
      break;
  }
  throw Error("representation '" + std::string(feature_kind_name(kind)) + "' needs matrix input");
}

}  // namespace

bool cell_order(const CellKey& a, const CellKey& b) {
  return std::tuple(a.k_percent, a.method, a.representation, a.classifier) <
         std::tuple(b.k_percent, b.method, b.representation, b.classifier);
}

std::vector<CellKey> experiment_grid(const ExperimentConfig& cfg) {
  std::vector<CellKey> grid;
  auto add = [&grid](CellKey key) {
    if (std::find(grid.begin(), grid.end(), key) == grid.end()) grid.push_back(key);
  };
  for (auto method : cfg.methods) {
    for (auto rep : cfg.representations) {
      for (auto clf : cfg.classifiers) {
        if (method == Method::none) {
          add({method, rep, clf, 0.0});
          continue;
        }
        for (double k : cfg.k_percents) add({method, rep, clf, k});
      }
    }
  }
  std::sort(grid.begin(), grid.end(), cell_order);
  return grid;
}

std::uint64_t cell_seed(std::uint64_t master_seed, const CellKey& key) {
  const std::string coordinate = std::string(resample::method_name(key.method)) + "|" +
                                 std::string(feature_kind_name(key.representation)) + "|" +
                                 std::string(classifier_name(key.classifier)) + "|" + format_double(key.k_percent);
  return mix_seed(master_seed, stable_hash(coordinate));
}

ClassifierSettings classifier_settings(const ExperimentConfig& cfg) { return {cfg.knn_k, cfg.svm, cfg.fnn}; }

evalmetrics::MetricsReport evaluate_cell(const FeatureMatrix& train, const FeatureMatrix& test, Method method,
                                         double k_percent, ClassifierKind classifier,
                                         const ClassifierSettings& settings,
                                         const resample::ResampleOptions& resample_options, std::uint64_t seed,
                                         Warnings* warnings) {
  if (train.classes != test.classes) throw Error("train and test class lists differ");
  if (train.cols != test.cols) throw Error("train and test column counts differ");

  const FeatureMatrix* fitted = &train;
  resample::OversampledMatrix augmented;
  if (method != Method::none) {
    auto plan = resample::target_sizes(class_distribution(train), k_percent);
    const auto dist = class_distribution(train);
    for (std::size_t c = 0; c < plan.labels.size(); ++c) {
      if (dist.counts[c] == 0 && plan.quotas[c] > 0) {
        plan.quotas[c] = 0;
        if (warnings) warnings->push_back("class '" + plan.labels[c] + "' has no training rows; not oversampled");
      }
    }
    augmented = resample::oversample(method, train, plan, mix_seed(seed, 1), resample_options);
    if (warnings) warnings->insert(warnings->end(), augmented.warnings.begin(), augmented.warnings.end());
    fitted = &augmented.matrix;
  }

  models::PredictionVector predicted;
  const std::uint64_t model_seed = mix_seed(seed, 2);
  switch (classifier) {
    case ClassifierKind::knn: {
      const auto model = models::knn_fit(*fitted, std::min(settings.knn_k, fitted->rows()));
      predicted = models::knn_predict(model, test);
      break;
    }
    case ClassifierKind::svm:
      predicted = models::svm_predict(models::svm_fit(*fitted, settings.svm, model_seed), test);
      break;
    case ClassifierKind::fnn:
      predicted = models::fnn_predict(models::fnn_fit(*fitted, settings.fnn, model_seed), test);
      break;
  }
  return evalmetrics::report(evalmetrics::confusion(test.labels, predicted.labels, test.classes));
}

std::vector<ExperimentCell> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto grid = experiment_grid(cfg);
  const std::uint64_t split_seed = mix_seed(cfg.seed, stable_hash("split"));

  // Per-representation train/test matrices, fitted once and shared by the cells.
  std::vector<std::pair<FeatureKind, MatrixPair>> prepared;
  TextInputs text;
  if (cfg.matrix) {
    require_file(*cfg.matrix, "matrix");
    const auto fm = load_matrix_csv(*cfg.matrix);
    const auto split = corpus::split_indices(fm.labels, fm.classes.size(), cfg.test_fraction, split_seed,
                                             cfg.stratified);
    prepared.emplace_back(FeatureKind::numeric, MatrixPair{select_rows(fm, split.train), select_rows(fm, split.test)});
  } else {
    require_file(cfg.corpus, "corpus");
    if (cfg.stopwords) require_file(*cfg.stopwords, "stopwords");
    if (cfg.embeddings) require_file(*cfg.embeddings, "embeddings");
    auto split = corpus::split(corpus::load_corpus(cfg.corpus), cfg.test_fraction, split_seed, cfg.stratified);
    text.train = std::move(split.train);
    text.test = std::move(split.test);
    if (text.train.empty() || text.test.empty()) throw Error("split left an empty train or test set");
    text.train_tokens = tokenize_all(text.train);
    text.test_tokens = tokenize_all(text.test);
    if (cfg.stopwords) text.stopwords = textfeat::load_stopwords(*cfg.stopwords);
    text.pooling = cfg.pooling;
    const bool wants_embedding = std::find(cfg.representations.begin(), cfg.representations.end(),
                                           FeatureKind::embedding) != cfg.representations.end();
    if (wants_embedding) text.embeddings = textfeat::load_embeddings(*cfg.embeddings);
    for (auto rep : cfg.representations) prepared.emplace_back(rep, vectorize(text, rep, text.train, text.train_tokens));
  }
  auto matrices_for = [&prepared](FeatureKind rep) -> const MatrixPair& {
    for (const auto& [kind, pair] : prepared) {
      if (kind == rep) return pair;
    }
    throw Error("representation not prepared");
  };

  const auto settings = classifier_settings(cfg);
  std::vector<ExperimentCell> cells(grid.size());

  auto run_cell = [&](std::size_t i) {
    const auto& key = grid[i];
    auto& cell = cells[i];
    cell.key = key;
    cell.seed = cell_seed(cfg.seed, key);
    const auto start = std::chrono::steady_clock::now();
    if (key.method == Method::random && cfg.random_mode == RandomMode::records && !cfg.matrix) {
      // Record-level duplication, then vectorizers refitted on the enlarged set.
      const auto plan = resample::target_sizes(corpus::class_distribution(text.train), key.k_percent);
      const auto enlarged = resample::random_oversample_records(text.train, plan, mix_seed(cell.seed, 1));
      const auto pair = vectorize(text, key.representation, enlarged, tokenize_all(enlarged));
      cell.result = evaluate_cell(pair.train, pair.test, Method::none, 0.0, key.classifier, settings, cfg.resample,
                                  cell.seed, &cell.warnings);
    } else {
      const auto& pair = matrices_for(key.representation);
      cell.result = evaluate_cell(pair.train, pair.test, key.method, key.k_percent, key.classifier, settings,
                                  cfg.resample, cell.seed, &cell.warnings);
    }
    if (cfg.timing) {
      cell.wall_time_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
  };

  std::vector<std::exception_ptr> errors(grid.size());
  auto guarded = [&](std::size_t i) {
    try {
      run_cell(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const std::size_t workers = std::min(cfg.threads, grid.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      guarded(i);
      if (errors[i]) break;
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < grid.size() && !failed; i = next++) {
          guarded(i);
          if (errors[i]) failed = true;
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  // Report the first failing cell in grid order.
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const ConfigError& e) {
      throw ConfigError(describe(grid[i]) + ": " + e.what());
    } catch (const std::exception& e) {
      throw Error(describe(grid[i]) + ": " + e.what());
    }
  }
  return cells;
}

}  // namespace imbalance::harness
