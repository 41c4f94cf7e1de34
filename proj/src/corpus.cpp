#include "imbalance/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "imbalance/error.hpp"
#include "imbalance/rng.hpp"

namespace imbalance::corpus {

namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\v\f";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kSpace);
  return s.substr(first, last - first + 1);
}

std::size_t round_half_up(double x) { return static_cast<std::size_t>(std::floor(x + 0.5)); }

// Fisher-Yates over [0, n).
std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[rng.uniform_index(i)]);
  }
  return order;
}

}  // namespace

Dataset::Dataset(std::vector<LabeledRecord> records) {
  records_.reserve(records.size());
  for (auto& r : records) add(std::move(r));
}

Dataset::Dataset(std::vector<LabeledRecord> records, std::vector<std::string> classes) {
  for (auto& c : classes) register_class(c);
  records_.reserve(records.size());
  for (auto& r : records) add(std::move(r));
}

void Dataset::add(LabeledRecord record) {
  if (trim(record.text).empty()) throw Error("record text is empty");
  if (trim(record.label).empty()) throw Error("record label is empty");
  register_class(record.label);
  records_.push_back(std::move(record));
}

std::size_t Dataset::class_index(std::string_view label) const noexcept {
  const auto it = std::find(classes_.begin(), classes_.end(), label);
  return static_cast<std::size_t>(it - classes_.begin());
}

void Dataset::register_class(const std::string& label) {
  if (class_index(label) == classes_.size()) classes_.push_back(label);
}

std::size_t ClassDistribution::count(std::string_view label) const noexcept {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return counts[i];
  }
  return 0;
}

Dataset parse_corpus(std::string_view content) {
  Dataset ds;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    const auto end = content.find('\n', pos);
    std::string_view line = content.substr(pos, end == std::string_view::npos ? end : end - pos);
    pos = end == std::string_view::npos ? content.size() : end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;

    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw ParseError("missing tab between label and text", line_no);
    const auto label = trim(line.substr(0, tab));
    const auto text = trim(line.substr(tab + 1));
    if (label.empty()) throw ParseError("empty label", line_no);
    if (text.empty()) throw ParseError("empty text", line_no);
    ds.add({std::string(text), std::string(label)});
  }
  if (ds.empty()) throw ParseError("corpus contains no records", 0);
  return ds;
}

Dataset load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error("failed reading corpus file: " + path.string());
  try {
    return parse_corpus(buffer.str());
  } catch (const ParseError& e) {
    throw e.with_context(path.string());
  }
}

void save_corpus(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write corpus file: " + path.string());
  for (const auto& r : ds.records()) out << r.label << '\t' << r.text << '\n';
  if (!out) throw Error("failed writing corpus file: " + path.string());
}

ClassDistribution class_distribution(const Dataset& ds) {
  ClassDistribution dist;
  dist.labels = ds.classes();
  dist.counts.assign(dist.labels.size(), 0);
  for (const auto& r : ds.records()) ++dist.counts[ds.class_index(r.label)];
  dist.total = ds.size();
  return dist;
}

IndexSplit split_indices(std::span<const std::size_t> class_of, std::size_t num_classes,
                         double test_fraction, std::uint64_t seed, bool stratified) {
  const std::size_t n = class_of.size();
  if (n < 2) throw Error("split needs at least 2 records");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw Error("test_fraction must lie in (0, 1)");

  Rng rng(seed);
  std::vector<bool> in_test(n, false);
  if (!stratified) {
    const auto order = shuffled_indices(n, rng);
    const std::size_t n_test = round_half_up(test_fraction * static_cast<double>(n));
    for (std::size_t i = 0; i < n_test; ++i) in_test[order[i]] = true;
  } else {
    std::vector<std::vector<std::size_t>> members(num_classes);
    for (std::size_t i = 0; i < n; ++i) {
      if (class_of[i] >= num_classes) throw Error("split: class id out of range");
      members[class_of[i]].push_back(i);
    }
    for (const auto& rows : members) {
      const auto order = shuffled_indices(rows.size(), rng);
      const std::size_t n_test = round_half_up(test_fraction * static_cast<double>(rows.size()));
      for (std::size_t i = 0; i < n_test; ++i) in_test[rows[order[i]]] = true;
    }
  }

  IndexSplit result;
  for (std::size_t i = 0; i < n; ++i) (in_test[i] ? result.test : result.train).push_back(i);
  return result;
}

SplitResult split(const Dataset& ds, double test_fraction, std::uint64_t seed, bool stratified) {
  std::vector<std::size_t> class_of;
  class_of.reserve(ds.size());
  for (const auto& r : ds.records()) class_of.push_back(ds.class_index(r.label));
  const auto idx = split_indices(class_of, ds.classes().size(), test_fraction, seed, stratified);

  SplitResult result{Dataset({}, ds.classes()), Dataset({}, ds.classes())};
  for (auto i : idx.train) result.train.add(ds.records()[i]);
  for (auto i : idx.test) result.test.add(ds.records()[i]);
  return result;
}

}  // namespace imbalance::corpus
