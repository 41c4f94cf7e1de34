#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "imbalance/feature_matrix.hpp"
#include "imbalance/rng.hpp"

namespace testing {

inline std::filesystem::path fixture_dir() { return IMBALANCE_FIXTURE_DIR; }

inline std::vector<std::string> class_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < n; ++c) out.push_back("c" + std::to_string(c));
  return out;
}

/// Uniform real entries in [-1, 1), or small integers in [-3, 3] when `grid`
/// (exact distances and frequent ties). Every class gets at least one row
/// when rows >= classes.
inline imbalance::FeatureMatrix random_matrix(imbalance::Rng& rng, std::size_t rows, std::size_t cols,
                                              std::size_t classes, bool grid = false) {
  imbalance::FeatureMatrix fm(cols, class_names(classes), imbalance::FeatureKind::numeric);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t label = i < classes ? i : rng.uniform_index(classes);
    auto row = fm.append_zero_row(label);
    for (auto& v : row) {
      v = grid ? static_cast<double>(rng.uniform_index(7)) - 3.0 : rng.uniform(-1.0, 1.0);
    }
  }
  return fm;
}

class TempDir {
 public:
  TempDir() {
    static std::uint64_t counter = 0;
    const auto tag = imbalance::mix_seed(static_cast<std::uint64_t>(::getpid()), ++counter);
    path_ = std::filesystem::temp_directory_path() / ("imbalance-test-" + std::to_string(tag));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// Hamilton apportionment in exact integer arithmetic: floor(w_i G / W)
/// each, then the leftover units go to the largest remainders w_i G mod W,
/// ties to the lower index.
inline std::vector<std::size_t> largest_remainder(const std::vector<std::size_t>& weights, std::size_t budget) {
  std::size_t total = 0;
  for (auto w : weights) total += w;
  std::vector<std::size_t> out(weights.size());
  std::vector<std::pair<std::size_t, std::size_t>> remainders;  // (remainder, index)
  std::size_t given = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const auto product = static_cast<unsigned __int128>(weights[i]) * budget;
    out[i] = static_cast<std::size_t>(product / total);
    given += out[i];
    remainders.emplace_back(static_cast<std::size_t>(product % total), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t u = 0; u < budget - given; ++u) ++out[remainders[u].second];
  return out;
}

}  // namespace testing
