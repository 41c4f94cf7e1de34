#include "imbalance/textfeat.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "imbalance/simd/kernels.hpp"

namespace imbalance::textfeat {

namespace {

// ---- UTF-8 ----------------------------------------------------------------

constexpr char32_t kInvalid = 0xFFFD;

// Decodes one code point at `pos`, advancing it. Malformed sequences yield
// U+FFFD and consume a single byte.
char32_t decode_utf8(std::string_view s, std::size_t& pos) {
  const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
  const unsigned char b0 = byte(pos);
  std::size_t len = 0;
  char32_t cp = 0;
  if (b0 < 0x80) {
    ++pos;
    return b0;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++pos;
    return kInvalid;
  }
  if (pos + len > s.size()) {
    ++pos;
    return kInvalid;
  }
  for (std::size_t i = 1; i < len; ++i) {
    const unsigned char b = byte(pos + i);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return kInvalid;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  pos += len;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// ---- character classes ------------------------------------------------------

struct Range {
  char32_t lo;
  char32_t hi;
};

// Letters and combining marks that may occur inside a word.
constexpr Range kWordRanges[] = {
    {U'a', U'z'},        {U'A', U'Z'},        {0x00AA, 0x00AA},    {0x00B5, 0x00B5},
    {0x00BA, 0x00BA},    {0x00C0, 0x00D6},    {0x00D8, 0x00F6},    {0x00F8, 0x02AF},
    {0x0300, 0x036F},    {0x0370, 0x0374},    {0x0376, 0x037D},    {0x037F, 0x037F},
    {0x0386, 0x0386},    {0x0388, 0x03FF},    {0x0400, 0x0481},    {0x0483, 0x052F},
    {0x0531, 0x0556},    {0x0560, 0x0588},    {0x05D0, 0x05EA},    {0x0620, 0x064A},
    {0x0904, 0x0939},    {0x10A0, 0x10FF},    {0x1E00, 0x1FFF},    {0x2D00, 0x2D2F},
    {0x3040, 0x30FF},    {0x4E00, 0x9FFF},    {0xAC00, 0xD7A3},
};

constexpr Range kDigitRanges[] = {
    {U'0', U'9'}, {0x0660, 0x0669}, {0x06F0, 0x06F9}, {0x0966, 0x096F}, {0xFF10, 0xFF19},
};

template <std::size_t N>
bool in_ranges(char32_t cp, const Range (&ranges)[N]) {
  for (const auto& r : ranges) {
    if (cp >= r.lo && cp <= r.hi) return true;
  }
  return false;
}

bool is_word_char(char32_t cp) { return in_ranges(cp, kWordRanges) || in_ranges(cp, kDigitRanges); }

bool even(char32_t cp) { return cp % 2 == 0; }

char32_t to_lower(char32_t cp) {
  if (cp < 0x80) return (cp >= U'A' && cp <= U'Z') ? cp + 0x20 : cp;
  // Latin-1 and Latin Extended-A
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;
  if (cp >= 0x0100 && cp <= 0x0137) return even(cp) ? cp + 1 : cp;
  if (cp >= 0x0139 && cp <= 0x0148) return even(cp) ? cp : cp + 1;
  if (cp >= 0x014A && cp <= 0x0177) return even(cp) ? cp + 1 : cp;
  if (cp == 0x0178) return 0x00FF;
  if (cp >= 0x0179 && cp <= 0x017E) return even(cp) ? cp : cp + 1;
  // Greek
  if (cp == 0x0386) return 0x03AC;
  if (cp >= 0x0388 && cp <= 0x038A) return cp + 0x25;
  if (cp == 0x038C) return 0x03CC;
  if (cp == 0x038E || cp == 0x038F) return cp + 0x3F;
  if (cp >= 0x0391 && cp <= 0x03AB && cp != 0x03A2) return cp + 0x20;
  // Cyrillic
  if (cp >= 0x0400 && cp <= 0x040F) return cp + 0x50;
  if (cp >= 0x0410 && cp <= 0x042F) return cp + 0x20;
  if (cp >= 0x0460 && cp <= 0x0481) return even(cp) ? cp + 1 : cp;
  if (cp >= 0x048A && cp <= 0x04BF) return even(cp) ? cp + 1 : cp;
  if (cp == 0x04C0) return 0x04CF;
  if (cp >= 0x04C1 && cp <= 0x04CE) return even(cp) ? cp : cp + 1;
  if (cp >= 0x04D0 && cp <= 0x052F) return even(cp) ? cp + 1 : cp;
  // Armenian, Georgian
  if (cp >= 0x0531 && cp <= 0x0556) return cp + 0x30;
  if (cp >= 0x10A0 && cp <= 0x10C5) return cp - 0x10A0 + 0x2D00;
  // Latin Extended Additional
  if (cp >= 0x1E00 && cp <= 0x1E95) return even(cp) ? cp + 1 : cp;
  if (cp >= 0x1EA0 && cp <= 0x1EFF) return even(cp) ? cp + 1 : cp;
  return cp;
}

// ---- parsing helpers ----------------------------------------------------------

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos >= line.size()) break;
    const auto start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
    fields.push_back(line.substr(start, pos - start));
  }
  return fields;
}

bool parse_size(std::string_view s, std::size_t& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

bool parse_double(std::string_view s, double& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

std::string read_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(std::string("cannot open ") + what + ": " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void fill_labels(FeatureMatrix& fm, std::size_t rows, std::vector<std::size_t> labels,
                 std::vector<std::string> classes) {
  if (classes.empty()) classes.push_back("unlabeled");
  if (labels.empty()) labels.assign(rows, 0);
  if (labels.size() != rows) throw Error("label count does not match text count");
  fm.classes = std::move(classes);
  fm.labels = std::move(labels);
  for (auto l : fm.labels) {
    if (l >= fm.classes.size()) throw Error("label index out of range");
  }
}

}  // namespace

TokenizedText tokenize(std::string_view text) {
  TokenizedText out;
  std::string current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = decode_utf8(text, pos);
    if (is_word_char(cp)) {
      append_utf8(current, to_lower(cp));
    } else if (!current.empty()) {
      out.tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.tokens.push_back(std::move(current));
  return out;
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double Vocabulary::idf(std::size_t column) const {
  const auto n = static_cast<double>(num_documents_);
  const auto df = static_cast<double>(df_.at(column));
  return std::log((1.0 + n) / (1.0 + df)) + 1.0;
}

Vocabulary build_vocab(std::span<const TokenizedText> train_texts, const StopwordSet& stopwords) {
  Vocabulary vocab;
  vocab.stopwords_ = stopwords;
  vocab.num_documents_ = train_texts.size();
  std::vector<std::size_t> last_seen;  // last document index + 1 per column
  for (std::size_t doc = 0; doc < train_texts.size(); ++doc) {
    for (const auto& tok : train_texts[doc].tokens) {
      if (stopwords.contains(tok)) continue;
      auto [it, inserted] = vocab.index_.try_emplace(tok, vocab.tokens_.size());
      if (inserted) {
        vocab.tokens_.push_back(tok);
        vocab.df_.push_back(0);
        last_seen.push_back(0);
      }
      const std::size_t col = it->second;
      if (last_seen[col] != doc + 1) {
        last_seen[col] = doc + 1;
        ++vocab.df_[col];
      }
    }
  }
  if (vocab.tokens_.empty()) throw Error("vocabulary is empty after stopword filtering");
  return vocab;
}

FeatureMatrix bow_matrix(std::span<const TokenizedText> texts, const Vocabulary& vocab,
                         std::vector<std::size_t> labels, std::vector<std::string> classes) {
  if (vocab.empty()) throw Error("bow_matrix: empty vocabulary");
  FeatureMatrix fm;
  fm.kind = FeatureKind::bow;
  fm.cols = vocab.size();
  fill_labels(fm, texts.size(), std::move(labels), std::move(classes));
  fm.values.assign(texts.size() * fm.cols, 0.0);
  for (std::size_t i = 0; i < texts.size(); ++i) {
    auto row = fm.row(i);
    for (const auto& tok : texts[i].tokens) {
      if (auto col = vocab.index_of(tok)) row[*col] += 1.0;
    }
  }
  return fm;
}

FeatureMatrix tfidf_matrix(std::span<const TokenizedText> texts, const Vocabulary& vocab,
                           std::vector<std::size_t> labels, std::vector<std::string> classes) {
  FeatureMatrix fm = bow_matrix(texts, vocab, std::move(labels), std::move(classes));
  fm.kind = FeatureKind::tfidf;
  std::vector<double> idf(vocab.size());
  for (std::size_t j = 0; j < idf.size(); ++j) idf[j] = vocab.idf(j);
  for (std::size_t i = 0; i < fm.rows(); ++i) {
    auto row = fm.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] *= idf[j];
    const double norm = std::sqrt(simd::dot(row, row));
    if (norm > 0.0) {
      for (auto& v : row) v /= norm;
    }
  }
  return fm;
}

bool EmbeddingTable::insert(std::string word, std::span<const double> vector) {
  if (vector.size() != dimension_) throw Error("embedding dimension mismatch for word '" + word + "'");
  auto [it, inserted] = index_.try_emplace(std::move(word), data_.size() / dimension_);
  if (inserted) {
    data_.insert(data_.end(), vector.begin(), vector.end());
  } else {
    std::copy(vector.begin(), vector.end(), data_.begin() + static_cast<std::ptrdiff_t>(it->second * dimension_));
  }
  return inserted;
}

std::span<const double> EmbeddingTable::find(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  if (it == index_.end()) return {};
  return {data_.data() + it->second * dimension_, dimension_};
}

EmbeddingTable parse_embeddings(std::string_view content, Warnings* warnings) {
  std::optional<EmbeddingTable> table;
  std::optional<std::size_t> header_count;
  std::vector<double> vec;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool first_content_line = true;
  while (pos < content.size()) {
    const auto end = content.find('\n', pos);
    std::string_view line = content.substr(pos, end == std::string_view::npos ? end : end - pos);
    pos = end == std::string_view::npos ? content.size() : end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto fields = split_fields(line);
    if (fields.empty()) continue;

    if (first_content_line) {
      first_content_line = false;
      std::size_t count = 0;
      std::size_t dim = 0;
      if (fields.size() == 2 && parse_size(fields[0], count) && parse_size(fields[1], dim)) {
        if (dim == 0) throw ParseError("header declares zero dimension", line_no);
        header_count = count;
        table.emplace(dim);
        continue;
      }
    }
    if (fields.size() < 2) throw ParseError("word without vector components", line_no);
    if (!table) table.emplace(fields.size() - 1);
    if (fields.size() - 1 != table->dimension()) {
      throw ParseError("expected " + std::to_string(table->dimension()) + " components, found " +
                           std::to_string(fields.size() - 1),
                       line_no);
    }
    vec.resize(table->dimension());
    for (std::size_t j = 0; j < vec.size(); ++j) {
      if (!parse_double(fields[j + 1], vec[j])) {
        throw ParseError("non-numeric component '" + std::string(fields[j + 1]) + "'", line_no);
      }
    }
    const std::string word(fields[0]);
    if (!table->insert(word, vec) && warnings != nullptr) {
      warnings->push_back("line " + std::to_string(line_no) + ": duplicate word '" + word +
                          "', keeping the last vector");
    }
  }
  if (!table || table->empty()) throw ParseError("embedding file contains no vectors", 0);
  if (header_count && *header_count != table->size() && warnings != nullptr) {
    warnings->push_back("header declares " + std::to_string(*header_count) + " words, found " +
                        std::to_string(table->size()));
  }
  return std::move(*table);
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, Warnings* warnings) {
  const auto content = read_file(path, "embedding file");
  try {
    return parse_embeddings(content, warnings);
  } catch (const ParseError& e) {
    throw e.with_context(path.string());
  }
}

std::vector<double> embed_text(const TokenizedText& text, const EmbeddingTable& table, Pooling pooling) {
  std::vector<double> out(table.dimension(), 0.0);
  std::size_t found = 0;
  for (const auto& tok : text.tokens) {
    const auto v = table.find(tok);
    if (v.empty()) continue;
    simd::axpy(1.0, v, out);
    ++found;
  }
  if (pooling == Pooling::mean && found > 0) {
    for (auto& x : out) x /= static_cast<double>(found);
  }
  return out;
}

FeatureMatrix embedding_matrix(std::span<const TokenizedText> texts, const EmbeddingTable& table,
                               Pooling pooling, std::vector<std::size_t> labels,
                               std::vector<std::string> classes) {
  if (table.empty()) throw Error("embedding table is empty");
  FeatureMatrix fm;
  fm.kind = FeatureKind::embedding;
  fm.cols = table.dimension();
  fill_labels(fm, texts.size(), std::move(labels), std::move(classes));
  fm.values.reserve(texts.size() * fm.cols);
  for (const auto& t : texts) {
    const auto v = embed_text(t, table, pooling);
    fm.values.insert(fm.values.end(), v.begin(), v.end());
  }
  return fm;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  const auto content = read_file(path, "stopword file");
  StopwordSet words;
  for (const auto& tok : tokenize(content).tokens) words.insert(tok);
  return words;
}

}  // namespace imbalance::textfeat
