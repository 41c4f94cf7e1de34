#include "imbalance/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "imbalance/error.hpp"

namespace imbalance::harness {

namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\v\f";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(kSpace) - first + 1);
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view value) {
  std::filesystem::path p{std::string(value)};
  return p.is_absolute() || base.empty() ? p : base / p;
}

// "50%" -> 0.5, "0.5" -> 0.5
double parse_ratio(std::string_view key, std::string_view value) {
  value = trim(value);
  if (!value.empty() && value.back() == '%') return parse_real(key, value.substr(0, value.size() - 1)) / 100.0;
  return parse_real(key, value);
}

}  // namespace

KeyValueFile KeyValueFile::parse(std::string_view content) {
  KeyValueFile kv;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    const auto end = content.find('\n', pos);
    std::string_view line = content.substr(pos, end == std::string_view::npos ? end : end - pos);
    pos = end == std::string_view::npos ? content.size() : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    kv.set(std::string(key), std::string(trim(line.substr(eq + 1))));
  }
  return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::optional<std::string> KeyValueFile::get(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

void KeyValueFile::set(std::string key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

std::string_view classifier_name(ClassifierKind kind) noexcept {
  switch (kind) {
    case ClassifierKind::knn:
      return "knn";
    case ClassifierKind::svm:
      return "svm";
    case ClassifierKind::fnn:
      return "fnn";
  }
  return "unknown";
}

ClassifierKind parse_classifier(std::string_view name) {
  for (auto k : {ClassifierKind::knn, ClassifierKind::svm, ClassifierKind::fnn}) {
    if (classifier_name(k) == name) return k;
  }
  throw ConfigError("unknown classifier '" + std::string(name) + "'");
}

FeatureKind parse_representation(std::string_view name) {
  for (auto k : {FeatureKind::bow, FeatureKind::tfidf, FeatureKind::embedding, FeatureKind::numeric}) {
    if (feature_kind_name(k) == name) return k;
  }
  throw ConfigError("unknown representation '" + std::string(name) + "'");
}

double parse_real(std::string_view key, std::string_view value) {
  value = trim(value);
  double out = 0.0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end || !std::isfinite(out)) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(value) + "'");
  }
  return out;
}

std::size_t parse_count(std::string_view key, std::string_view value) {
  value = trim(value);
  std::size_t out = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" + std::string(value) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  value = trim(value);
  if (value == "true" || value == "yes" || value == "on" || value == "1") return true;
  if (value == "false" || value == "no" || value == "off" || value == "0") return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(value) + "'");
}

std::vector<std::string> parse_list(std::string_view value) {
  std::vector<std::string> items;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const auto comma = value.find(',', pos);
    const auto item = trim(value.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (!item.empty()) items.emplace_back(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return items;
}

std::vector<double> parse_real_list(std::string_view key, std::string_view value) {
  std::vector<double> out;
  for (const auto& item : parse_list(value)) out.push_back(parse_real(key, item));
  return out;
}

void ExperimentConfig::validate() const {
  if (corpus.empty() && !matrix) throw ConfigError("config: either 'corpus' or 'matrix' is required");
  if (!corpus.empty() && matrix) throw ConfigError("config: 'corpus' and 'matrix' are mutually exclusive");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw ConfigError("config: test_fraction must lie in (0, 1)");
  if (methods.empty()) throw ConfigError("config: no methods listed");
  if (representations.empty()) throw ConfigError("config: no representations listed");
  if (classifiers.empty()) throw ConfigError("config: no classifiers listed");
  const bool needs_k = std::any_of(methods.begin(), methods.end(),
                                   [](resample::Method m) { return m != resample::Method::none; });
  if (needs_k && k_percents.empty()) throw ConfigError("config: no k_percents listed");
  for (double k : k_percents) {
    if (!(k >= 0.0 && k <= 1.0)) throw ConfigError("config: k_percents must lie in [0, 1]");
  }
  for (auto rep : representations) {
    if (matrix && rep != FeatureKind::numeric) {
      throw ConfigError("config: matrix input supports only the numeric representation");
    }
    if (!matrix && rep == FeatureKind::numeric) {
      throw ConfigError("config: the numeric representation requires matrix input");
    }
    if (rep == FeatureKind::embedding && !embeddings) {
      throw ConfigError("config: the embedding representation requires 'embeddings'");
    }
  }
  if (knn_k == 0) throw ConfigError("config: knn.k must be positive");
  if (resample.k_neighbors == 0 || resample.m_neighbors == 0) {
    throw ConfigError("config: resample neighbor counts must be positive");
  }
  if (svm.kernel == models::KernelKind::rbf && !(svm.gamma > 0.0)) throw ConfigError("config: svm.gamma must be positive");
  if (!(svm.lambda > 0.0)) throw ConfigError("config: svm.lambda must be positive");
  if (svm.epochs == 0) throw ConfigError("config: svm.epochs must be positive");
  if (fnn.hidden.empty() ||
      std::any_of(fnn.hidden.begin(), fnn.hidden.end(), [](std::size_t h) { return h == 0; })) {
    throw ConfigError("config: fnn.hidden sizes must be positive");
  }
  if (fnn.batch_size == 0) throw ConfigError("config: fnn.batch_size must be positive");
  if (!(fnn.dropout >= 0.0 && fnn.dropout < 1.0)) throw ConfigError("config: fnn.dropout must lie in [0, 1)");
  if (!(fnn.learning_rate > 0.0)) throw ConfigError("config: fnn.learning_rate must be positive");
  if (threads == 0) throw ConfigError("config: threads must be positive");
}

ExperimentConfig config_from_pairs(const KeyValueFile& kv, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  bool representations_set = false;
  using Setter = std::function<void(std::string_view, std::string_view)>;
  const std::map<std::string, Setter, std::less<>> setters = {
      {"corpus", [&](auto, auto v) { cfg.corpus = resolve(base_dir, v); }},
      {"matrix", [&](auto, auto v) { cfg.matrix = resolve(base_dir, v); }},
      {"embeddings", [&](auto, auto v) { cfg.embeddings = resolve(base_dir, v); }},
      {"stopwords", [&](auto, auto v) { cfg.stopwords = resolve(base_dir, v); }},
      {"out", [&](auto, auto v) { cfg.out_dir = resolve(base_dir, v); }},
      {"test_fraction", [&](auto k, auto v) { cfg.test_fraction = parse_ratio(k, v); }},
      {"stratified", [&](auto k, auto v) { cfg.stratified = parse_bool(k, v); }},
      {"k_percents",
       [&](auto k, auto v) {
         cfg.k_percents.clear();
         for (const auto& item : parse_list(v)) cfg.k_percents.push_back(parse_ratio(k, item));
       }},
      {"methods",
       [&](auto, auto v) {
         cfg.methods.clear();
         for (const auto& item : parse_list(v)) {
           try {
             cfg.methods.push_back(resample::parse_method(item));
           } catch (const Error& e) {
             throw ConfigError(e.what());
           }
         }
       }},
      {"representations",
       [&](auto, auto v) {
         representations_set = true;
         cfg.representations.clear();
         for (const auto& item : parse_list(v)) cfg.representations.push_back(parse_representation(item));
       }},
      {"classifiers",
       [&](auto, auto v) {
         cfg.classifiers.clear();
         for (const auto& item : parse_list(v)) cfg.classifiers.push_back(parse_classifier(item));
       }},
      {"random_mode",
       [&](auto k, auto v) {
         if (v == "vector") cfg.random_mode = RandomMode::vector;
         else if (v == "records") cfg.random_mode = RandomMode::records;
         else throw ConfigError(std::string(k) + ": expected vector or records");
       }},
      {"pooling",
       [&](auto k, auto v) {
         if (v == "sum") cfg.pooling = textfeat::Pooling::sum;
         else if (v == "mean") cfg.pooling = textfeat::Pooling::mean;
         else throw ConfigError(std::string(k) + ": expected sum or mean");
       }},
      {"seed", [&](auto k, auto v) { cfg.seed = parse_count(k, v); }},
      {"timing", [&](auto k, auto v) { cfg.timing = parse_bool(k, v); }},
      {"threads", [&](auto k, auto v) { cfg.threads = parse_count(k, v); }},
      {"resample.k_neighbors", [&](auto k, auto v) { cfg.resample.k_neighbors = parse_count(k, v); }},
      {"resample.m_neighbors", [&](auto k, auto v) { cfg.resample.m_neighbors = parse_count(k, v); }},
      {"knn.k", [&](auto k, auto v) { cfg.knn_k = parse_count(k, v); }},
      {"svm.kernel",
       [&](auto, auto v) {
         try {
           cfg.svm.kernel = models::parse_kernel(v);
         } catch (const Error& e) {
           throw ConfigError(e.what());
         }
       }},
      {"svm.gamma", [&](auto k, auto v) { cfg.svm.gamma = parse_real(k, v); }},
      {"svm.lambda", [&](auto k, auto v) { cfg.svm.lambda = parse_real(k, v); }},
      {"svm.epochs", [&](auto k, auto v) { cfg.svm.epochs = parse_count(k, v); }},
      {"fnn.hidden",
       [&](auto k, auto v) {
         cfg.fnn.hidden.clear();
         for (const auto& item : parse_list(v)) cfg.fnn.hidden.push_back(parse_count(k, item));
       }},
      {"fnn.epochs", [&](auto k, auto v) { cfg.fnn.epochs = parse_count(k, v); }},
      {"fnn.learning_rate", [&](auto k, auto v) { cfg.fnn.learning_rate = parse_real(k, v); }},
      {"fnn.batch_size", [&](auto k, auto v) { cfg.fnn.batch_size = parse_count(k, v); }},
      {"fnn.dropout", [&](auto k, auto v) { cfg.fnn.dropout = parse_real(k, v); }},
  };
  for (const auto& [key, value] : kv.entries()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(key, value);
  }
  if (cfg.matrix && !representations_set) cfg.representations = {FeatureKind::numeric};
  if (!representations_set && cfg.embeddings && !cfg.matrix) cfg.representations.push_back(FeatureKind::embedding);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  const auto kv = KeyValueFile::load(path);
  return config_from_pairs(kv, path.parent_path());
}

}  // namespace imbalance::harness
