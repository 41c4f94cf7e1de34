#include "imbalance/harness/synthetic.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "imbalance/error.hpp"
#include "imbalance/harness/matrix_io.hpp"
#include "imbalance/rng.hpp"

namespace imbalance::harness {

namespace {

const std::map<std::string, std::vector<std::string>>& topic_lexicons() {
  static const std::map<std::string, std::vector<std::string>> lexicons = {
      {"affiliation",
       {"партия", "член", "организация", "союз", "вступил", "общество", "клуб", "движение", "состоял",
        "ассоциация", "комитет", "совет", "объединение", "участник", "братство", "фракция"}},
      {"birth",
       {"родился", "родилась", "рождение", "уроженец", "уроженка", "появился", "свет", "деревне",
        "губернии", "младенец", "крещён", "купеческой", "крестьянской", "местечке", "дворянской", "уезда"}},
      {"death",
       {"умер", "скончался", "умерла", "погиб", "смерть", "похоронен", "кладбище", "могила", "кончина",
        "болезни", "убит", "расстрелян", "гибель", "похороны", "траур", "скончалась"}},
      {"education",
       {"окончил", "учился", "университет", "гимназию", "училище", "факультет", "институт", "студент",
        "диплом", "лицей", "семинарию", "курсы", "выпускник", "обучение", "экзамены", "консерваторию"}},
      {"family",
       {"женат", "жена", "муж", "брак", "супруга", "вдова", "сестра", "брат", "свадьба", "женился",
        "вышла", "замуж", "тесть", "семья", "родственник", "венчание"}},
      {"occupation",
       {"работал", "служил", "инженер", "врач", "учитель", "писатель", "художник", "должность", "завод",
        "редактор", "профессор", "чиновник", "трудился", "агроном", "журналист", "библиотекарь"}},
      {"parenting",
       {"сын", "дочь", "дети", "воспитывал", "родились", "отец", "мать", "внук", "детей", "сыновья",
        "дочери", "усыновил", "наследник", "первенец", "младший", "старший"}},
      {"personal_events",
       {"переехал", "путешествие", "болел", "ранен", "арестован", "ссылка", "эмиграция", "вернулся",
        "юбилей", "праздновал", "поездка", "отпуск", "лечился", "познакомился", "дружил", "письмо"}},
      {"professional_events",
       {"назначен", "награжден", "орден", "премию", "избран", "повышен", "уволен", "звание", "медаль",
        "возглавил", "основал", "руководил", "директором", "председателем", "открыл", "опубликовал"}},
      {"residence",
       {"жил", "проживал", "поселился", "дом", "квартира", "город", "улице", "усадьба", "переселился",
        "москве", "петербурге", "имении", "столице", "район", "жильё", "посёлок"}},
  };
  return lexicons;
}

const std::vector<std::string>& filler_words() {
  static const std::vector<std::string> words = {
      "он",      "она",  "в",     "на",   "году",  "после",    "также",   "был",   "была", "этот",
      "время",   "затем", "который", "где", "его",  "её",       "с",       "и",     "по",   "к",
      "от",      "за",   "через", "несколько", "лет", "более", "около",   "вместе", "там",  "иван",
      "пётр",    "анна", "мария", "николай", "сергей", "ольга", "фёдор", "вскоре"};
  return words;
}

// First token of every sentence: a given name.
constexpr std::size_t kFirstName = 29;
constexpr std::size_t kNameCount = 8;

std::string format_fixed6(double v) {
  std::array<char, 48> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 6);
  if (ec != std::errc{}) throw Error("cannot format number");
  std::string s(buf.data(), ptr);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

// "class.<name>.<field>" -> {name, field}
std::optional<std::pair<std::string, std::string>> split_class_key(const std::string& key) {
  constexpr std::string_view prefix = "class.";
  if (key.rfind(prefix, 0) != 0) return std::nullopt;
  const auto dot = key.rfind('.');
  if (dot <= prefix.size()) throw ConfigError("malformed key '" + key + "'");
  return std::pair{key.substr(prefix.size(), dot - prefix.size()), key.substr(dot + 1)};
}

}  // namespace

void SyntheticSpec::validate() const {
  if (dimension == 0) throw ConfigError("synthetic spec: dimension must be positive");
  if (!(stddev > 0.0) || !std::isfinite(stddev)) throw ConfigError("synthetic spec: std must be positive");
  if (classes.empty()) throw ConfigError("synthetic spec: no classes");
  for (const auto& c : classes) {
    if (c.count == 0) throw ConfigError("synthetic spec: class '" + c.name + "' has count 0");
    if (c.mean.size() != dimension) {
      throw ConfigError("synthetic spec: class '" + c.name + "' mean has " + std::to_string(c.mean.size()) +
                        " entries, expected " + std::to_string(dimension));
    }
  }
}

FeatureMatrix generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  std::vector<std::string> names;
  for (const auto& c : spec.classes) names.push_back(c.name);
  FeatureMatrix fm(spec.dimension, std::move(names), FeatureKind::numeric);
  for (std::size_t c = 0; c < spec.classes.size(); ++c) {
    Rng rng(mix_seed(spec.seed, c));
    const auto& cls = spec.classes[c];
    for (std::size_t i = 0; i < cls.count; ++i) {
      auto row = fm.append_zero_row(c);
      for (std::size_t j = 0; j < spec.dimension; ++j) row[j] = cls.mean[j] + spec.stddev * rng.normal();
    }
  }
  return fm;
}

const std::vector<std::string>& builtin_topic_words(const std::string& topic) {
  const auto& lex = topic_lexicons();
  const auto it = lex.find(topic);
  if (it == lex.end()) throw ConfigError("no built-in lexicon for topic '" + topic + "'");
  return it->second;
}

void CorpusSpec::validate() const {
  if (classes.size() < 2) throw ConfigError("corpus spec: at least 2 classes required");
  for (const auto& t : classes) {
    if (t.count == 0) throw ConfigError("corpus spec: class '" + t.name + "' has count 0");
    if (t.words.empty()) builtin_topic_words(t.name);
  }
  if (!(topic_rate > 0.0) || !(confusion >= 0.0) || topic_rate + confusion > 1.0) {
    throw ConfigError("corpus spec: need topic_rate > 0, confusion >= 0, topic_rate + confusion <= 1");
  }
  if (min_words == 0 || max_words < min_words) throw ConfigError("corpus spec: bad sentence length range");
  if (embedding_dim == 0) throw ConfigError("corpus spec: embedding_dim must be positive");
}

SyntheticCorpus generate_corpus(const CorpusSpec& spec) {
  spec.validate();
  std::vector<const std::vector<std::string>*> lexicon;
  for (const auto& t : spec.classes) lexicon.push_back(t.words.empty() ? &builtin_topic_words(t.name) : &t.words);
  const auto& filler = filler_words();

  // Sentences: class-ordered, then shuffled so the file interleaves classes.
  Rng rng(mix_seed(spec.seed, stable_hash("sentences")));
  std::vector<corpus::LabeledRecord> records;
  for (std::size_t c = 0; c < spec.classes.size(); ++c) {
    for (std::size_t i = 0; i < spec.classes[c].count; ++i) {
      const std::size_t length = spec.min_words + rng.uniform_index(spec.max_words - spec.min_words + 1);
      std::string text = filler[kFirstName + rng.uniform_index(kNameCount)];
      for (std::size_t w = 1; w < length; ++w) {
        const double u = rng.uniform_closed01();
        const std::vector<std::string>* source = &filler;
        if (u < spec.topic_rate) {
          source = lexicon[c];
        } else if (u < spec.topic_rate + spec.confusion) {
          std::size_t other = rng.uniform_index(spec.classes.size() - 1);
          if (other >= c) ++other;
          source = lexicon[other];
        }
        text += ' ';
        text += (*source)[rng.uniform_index(source->size())];
      }
      text += '.';
      records.push_back({std::move(text), spec.classes[c].name});
    }
  }
  for (std::size_t i = records.size(); i > 1; --i) std::swap(records[i - 1], records[rng.uniform_index(i)]);
  std::vector<std::string> class_names;
  for (const auto& t : spec.classes) class_names.push_back(t.name);

  SyntheticCorpus out;
  out.dataset = corpus::Dataset(std::move(records), std::move(class_names));

  // Embeddings: topic words cluster around a per-topic centroid, filler words
  // are isotropic noise. Every seventh filler word is left out so the table
  // has out-of-vocabulary gaps.
  Rng erng(mix_seed(spec.seed, stable_hash("embeddings")));
  const std::size_t dim = spec.embedding_dim;
  auto add_word = [&](const std::string& word, const std::vector<double>& centre, double spread) {
    for (const auto& w : out.embedding_words) {
      if (w == word) return;
    }
    std::vector<double> v(dim);
    for (std::size_t j = 0; j < dim; ++j) v[j] = centre[j] + spread * erng.normal();
    out.embedding_words.push_back(word);
    out.embedding_vectors.push_back(std::move(v));
  };
  for (std::size_t c = 0; c < spec.classes.size(); ++c) {
    std::vector<double> centre(dim);
    for (auto& x : centre) x = erng.normal();
    for (const auto& word : *lexicon[c]) add_word(word, centre, 0.5);
  }
  const std::vector<double> origin(dim, 0.0);
  for (std::size_t i = 0; i < filler.size(); ++i) {
    if (i % 7 == 6) continue;
    add_word(filler[i], origin, 0.7);
  }
  return out;
}

std::string format_embeddings(const SyntheticCorpus& corpus) {
  const std::size_t dim = corpus.embedding_vectors.empty() ? 0 : corpus.embedding_vectors.front().size();
  std::string out = std::to_string(corpus.embedding_words.size()) + " " + std::to_string(dim) + "\n";
  for (std::size_t i = 0; i < corpus.embedding_words.size(); ++i) {
    out += corpus.embedding_words[i];
    for (double v : corpus.embedding_vectors[i]) {
      out += ' ';
      out += format_fixed6(v);
    }
    out += '\n';
  }
  return out;
}

SynthFile synth_from_pairs(const KeyValueFile& kv) {
  SynthFile file;
  const auto kind = kv.get("kind").value_or("gaussian");
  if (kind == "gaussian") {
    file.kind = SynthFile::Kind::gaussian;
  } else if (kind == "corpus") {
    file.kind = SynthFile::Kind::corpus;
  } else {
    throw ConfigError("kind: expected gaussian or corpus, got '" + kind + "'");
  }
  const bool gaussian = file.kind == SynthFile::Kind::gaussian;

  auto gaussian_class = [&](const std::string& name) -> GaussianClass& {
    for (auto& c : file.gaussian.classes) {
      if (c.name == name) return c;
    }
    return file.gaussian.classes.emplace_back(GaussianClass{name, 0, {}});
  };
  auto corpus_class = [&](const std::string& name) -> CorpusSpec::Topic& {
    for (auto& c : file.corpus.classes) {
      if (c.name == name) return c;
    }
    return file.corpus.classes.emplace_back(CorpusSpec::Topic{name, 0, {}});
  };

  for (const auto& [key, value] : kv.entries()) {
    if (key == "kind") continue;
    if (key == "seed") {
      file.gaussian.seed = file.corpus.seed = parse_count(key, value);
    } else if (auto cls = split_class_key(key)) {
      const auto& [name, field] = *cls;
      if (field == "count") {
        const auto n = parse_count(key, value);
        if (gaussian) gaussian_class(name).count = n;
        else corpus_class(name).count = n;
      } else if (gaussian && field == "mean") {
        gaussian_class(name).mean = parse_real_list(key, value);
      } else if (!gaussian && field == "words") {
        corpus_class(name).words = parse_list(value);
      } else {
        throw ConfigError("unknown synthetic spec key '" + key + "'");
      }
    } else if (gaussian && key == "dimension") {
      file.gaussian.dimension = parse_count(key, value);
    } else if (gaussian && key == "std") {
      file.gaussian.stddev = parse_real(key, value);
    } else if (!gaussian && key == "confusion") {
      file.corpus.confusion = parse_real(key, value);
    } else if (!gaussian && key == "topic_rate") {
      file.corpus.topic_rate = parse_real(key, value);
    } else if (!gaussian && key == "min_words") {
      file.corpus.min_words = parse_count(key, value);
    } else if (!gaussian && key == "max_words") {
      file.corpus.max_words = parse_count(key, value);
    } else if (!gaussian && key == "embedding_dim") {
      file.corpus.embedding_dim = parse_count(key, value);
    } else if (!gaussian && key == "embeddings_out") {
      file.corpus.embeddings_out = value;
    } else {
      throw ConfigError("unknown synthetic spec key '" + key + "'");
    }
  }
  if (gaussian) file.gaussian.validate();
  else file.corpus.validate();
  return file;
}

SynthFile load_synth_spec(const std::filesystem::path& path) { return synth_from_pairs(KeyValueFile::load(path)); }

void run_synth(const SynthFile& spec, const std::filesystem::path& out) {
  if (spec.kind == SynthFile::Kind::gaussian) {
    save_matrix_csv(generate_synthetic(spec.gaussian), out);
    return;
  }
  const auto generated = generate_corpus(spec.corpus);
  corpus::save_corpus(generated.dataset, out);
  if (spec.corpus.embeddings_out) {
    auto path = *spec.corpus.embeddings_out;
    if (path.is_relative()) path = out.parent_path() / path;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error("cannot write " + path.string());
    file << format_embeddings(generated);
    if (!file) throw Error("write failed: " + path.string());
  }
}

}  // namespace imbalance::harness
