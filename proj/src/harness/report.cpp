#include "imbalance/harness/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "imbalance/error.hpp"
#include "imbalance/harness/matrix_io.hpp"

namespace imbalance::harness {

namespace {

using resample::Method;

std::vector<ExperimentCell> sorted(std::span<const ExperimentCell> cells) {
  std::vector<ExperimentCell> out(cells.begin(), cells.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const ExperimentCell& a, const ExperimentCell& b) { return cell_order(a.key, b.key); });
  return out;
}

std::string percent(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", ratio * 100.0);
  return buf;
}

// 0.5 -> "50", 0.125 -> "12.5"
std::string k_label(double k) {
  std::string s = percent(k);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

std::string_view method_title(Method m) {
  switch (m) {
    case Method::none:
      return "Original training set";
    case Method::random:
      return "Random over-sampling";
    case Method::smote:
      return "SMOTE";
    case Method::borderline_smote:
      return "Borderline SMOTE";
    case Method::adasyn:
      return "ADASYN";
  }
  return "?";
}

std::string_view representation_title(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::bow:
      return "BoW";
    case FeatureKind::tfidf:
      return "TF-IDF";
    case FeatureKind::embedding:
      return "Embedding";
    case FeatureKind::numeric:
      return "Numeric";
  }
  return "?";
}

std::string classifier_title(ClassifierKind kind) {
  std::string s(classifier_name(kind));
  for (auto& ch : s) ch = static_cast<char>(ch - 'a' + 'A');
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    fields.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (comma == std::string_view::npos) return fields;
    pos = comma + 1;
  }
}

template <typename T>
T parse_number(std::string_view field, std::size_t line_no, const char* name) {
  T value{};
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError(std::string("bad ") + name + " '" + std::string(field) + "'", line_no);
  }
  return value;
}

}  // namespace

std::string format_cells_csv(std::span<const ExperimentCell> cells) {
  std::string out(kCellsHeader);
  out += '\n';
  for (const auto& cell : sorted(cells)) {
    const auto& r = cell.result;
    out += std::string(resample::method_name(cell.key.method)) + ',' +
           std::string(feature_kind_name(cell.key.representation)) + ',' +
           std::string(classifier_name(cell.key.classifier)) + ',' + format_double(cell.key.k_percent) + ',' +
           format_double(r.accuracy) + ',' + format_double(r.macro_f1) + ',' + format_double(r.macro_precision) +
           ',' + format_double(r.macro_recall) + ',' + std::to_string(cell.seed) + ',' +
           format_double(cell.wall_time_ms) + '\n';
  }
  return out;
}

std::vector<ExperimentCell> parse_cells_csv(std::string_view content) {
  std::vector<ExperimentCell> cells;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < content.size()) {
    const auto end = content.find('\n', pos);
    auto line = content.substr(pos, end == std::string_view::npos ? end : end - pos);
    pos = end == std::string_view::npos ? content.size() : end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kCellsHeader) throw ParseError("unexpected header", line_no);
      header_seen = true;
      continue;
    }
    const auto f = split_fields(line);
    if (f.size() != 10) throw ParseError("expected 10 fields, got " + std::to_string(f.size()), line_no);
    ExperimentCell cell;
    try {
      cell.key.method = resample::parse_method(f[0]);
      cell.key.representation = parse_representation(f[1]);
      cell.key.classifier = parse_classifier(f[2]);
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
    cell.key.k_percent = parse_number<double>(f[3], line_no, "k_percent");
    cell.result.accuracy = parse_number<double>(f[4], line_no, "accuracy");
    cell.result.macro_f1 = parse_number<double>(f[5], line_no, "macro_f1");
    cell.result.macro_precision = parse_number<double>(f[6], line_no, "macro_precision");
    cell.result.macro_recall = parse_number<double>(f[7], line_no, "macro_recall");
    cell.seed = parse_number<std::uint64_t>(f[8], line_no, "seed");
    cell.wall_time_ms = parse_number<double>(f[9], line_no, "wall_time_ms");
    cells.push_back(std::move(cell));
  }
  if (!header_seen) throw ParseError("empty cells file", 0);
  return cells;
}

std::vector<ExperimentCell> load_cells_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_cells_csv(buffer.str());
  } catch (const ParseError& e) {
    throw e.with_context(path.string());
  }
}

std::string format_markdown(std::span<const ExperimentCell> input) {
  const auto cells = sorted(input);

  std::vector<std::pair<FeatureKind, ClassifierKind>> columns;
  std::vector<double> ks;
  std::vector<Method> methods;
  for (const auto& c : cells) {
    const std::pair col{c.key.representation, c.key.classifier};
    if (std::find(columns.begin(), columns.end(), col) == columns.end()) columns.push_back(col);
    if (std::find(methods.begin(), methods.end(), c.key.method) == methods.end()) methods.push_back(c.key.method);
    if (c.key.method != Method::none && std::find(ks.begin(), ks.end(), c.key.k_percent) == ks.end()) {
      ks.push_back(c.key.k_percent);
    }
  }
  std::sort(columns.begin(), columns.end());
  std::sort(methods.begin(), methods.end());

  auto find = [&cells](Method m, double k, const std::pair<FeatureKind, ClassifierKind>& col) -> const ExperimentCell* {
    for (const auto& c : cells) {
      if (c.key.method == m && c.key.representation == col.first && c.key.classifier == col.second &&
          (m == Method::none || c.key.k_percent == k)) {
        return &c;
      }
    }
    return nullptr;
  };

  struct Metric {
    const char* name;
    double evalmetrics::MetricsReport::*field;
  };
  const Metric metrics[] = {{"Accuracy", &evalmetrics::MetricsReport::accuracy},
                            {"F1 score", &evalmetrics::MetricsReport::macro_f1},
                            {"Precision", &evalmetrics::MetricsReport::macro_precision},
                            {"Recall", &evalmetrics::MetricsReport::macro_recall}};

  std::string out = "# Experimental results\n";
  auto section = [&](const std::string& title, double k) {
    out += "\n## " + title + "\n\n| Method | Metric (%) |";
    for (const auto& [rep, clf] : columns) {
      out += ' ';
      out += representation_title(rep);
      out += ' ' + classifier_title(clf) + " |";
    }
    out += "\n|---|---|";
    for (std::size_t i = 0; i < columns.size(); ++i) out += "---:|";
    out += '\n';
    for (auto m : methods) {
      bool first = true;
      for (const auto& metric : metrics) {
        out += "| ";
        out += first ? method_title(m) : "";
        out += " | ";
        out += metric.name;
        out += " |";
        for (const auto& col : columns) {
          const auto* cell = find(m, k, col);
          out += ' ' + (cell ? percent(cell->result.*metric.field) : std::string("-")) + " |";
        }
        out += '\n';
        first = false;
      }
    }
  };
  if (ks.empty()) {
    section("Original training set", 0.0);
  } else {
    for (double k : ks) section("k = " + k_label(k) + "%", k);
  }
  return out;
}

std::filesystem::path emit_report(std::span<const ExperimentCell> cells, ReportFormat format,
                                  const std::filesystem::path& out_dir) {
  if (cells.empty()) throw Error("no cells to report");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create output directory " + out_dir.string() + ": " + ec.message());
  const auto path = out_dir / (format == ReportFormat::csv ? "cells.csv" : "report.md");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << (format == ReportFormat::csv ? format_cells_csv(cells) : format_markdown(cells));
  if (!out) throw Error("write failed: " + path.string());
  return path;
}

}  // namespace imbalance::harness
