#include "imbalance/harness/matrix_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "imbalance/error.hpp"

namespace imbalance::harness {

namespace {

std::string_view strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw Error("cannot format number");
  return std::string(buf.data(), ptr);
}

FeatureMatrix parse_matrix_csv(std::string_view content) {
  FeatureMatrix fm;
  fm.kind = FeatureKind::numeric;
  bool have_cols = false;
  std::vector<double> row;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    const auto end = content.find('\n', pos);
    const auto line = strip_cr(content.substr(pos, end == std::string_view::npos ? end : end - pos));
    pos = end == std::string_view::npos ? content.size() : end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    const auto comma = line.find(',');
    if (comma == std::string_view::npos) throw ParseError("expected 'label,value,...'", line_no);
    const auto label = line.substr(0, comma);
    if (label.empty()) throw ParseError("empty label", line_no);

    row.clear();
    std::size_t field_start = comma + 1;
    while (true) {
      const auto next = line.find(',', field_start);
      auto field = line.substr(field_start, next == std::string_view::npos ? std::string_view::npos : next - field_start);
      while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
      while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
      double v = 0.0;
      const auto* fend = field.data() + field.size();
      auto [ptr, ec] = std::from_chars(field.data(), fend, v);
      if (field.empty() || ec != std::errc{} || ptr != fend || !std::isfinite(v)) {
        throw ParseError("bad value '" + std::string(field) + "'", line_no);
      }
      row.push_back(v);
      if (next == std::string_view::npos) break;
      field_start = next + 1;
    }
    if (!have_cols) {
      fm.cols = row.size();
      have_cols = true;
    } else if (row.size() != fm.cols) {
      throw ParseError("expected " + std::to_string(fm.cols) + " values, got " + std::to_string(row.size()), line_no);
    }

    std::size_t cls = 0;
    while (cls < fm.classes.size() && fm.classes[cls] != label) ++cls;
    if (cls == fm.classes.size()) fm.classes.emplace_back(label);
    fm.append_row(row, cls);
  }
  if (fm.empty()) throw ParseError("matrix file has no rows", 0);
  return fm;
}

FeatureMatrix load_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_matrix_csv(buffer.str());
  } catch (const ParseError& e) {
    throw e.with_context(path.string());
  }
}

std::string format_matrix_csv(const FeatureMatrix& fm) {
  std::string out;
  for (std::size_t i = 0; i < fm.rows(); ++i) {
    out += fm.classes.at(fm.labels[i]);
    for (double v : fm.row(i)) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

void save_matrix_csv(const FeatureMatrix& fm, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << format_matrix_csv(fm);
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace imbalance::harness
