#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "imbalance/feature_matrix.hpp"

namespace imbalance::harness {

/// CSV, one sample per line, `label,v1,...,vd`. No header. Classes are
/// registered in first-appearance order. Throws ParseError on ragged rows or
/// non-numeric values.
FeatureMatrix parse_matrix_csv(std::string_view content);
FeatureMatrix load_matrix_csv(const std::filesystem::path& path);

/// Shortest round-trip formatting, so a save/load cycle is lossless.
std::string format_matrix_csv(const FeatureMatrix& fm);
void save_matrix_csv(const FeatureMatrix& fm, const std::filesystem::path& path);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace imbalance::harness
