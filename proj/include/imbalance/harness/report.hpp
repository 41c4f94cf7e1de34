#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imbalance/harness/experiment.hpp"

namespace imbalance::harness {

inline constexpr std::string_view kCellsHeader =
    "method,representation,classifier,k_percent,accuracy,macro_f1,macro_precision,macro_recall,seed,wall_time_ms";

/// Header plus one row per cell, sorted by cell_order. Metrics and k_percent
/// (a ratio) use shortest round-trip formatting.
std::string format_cells_csv(std::span<const ExperimentCell> cells);

/// Inverse of format_cells_csv (per-class metrics are not stored).
/// Throws ParseError on a wrong header or malformed row.
std::vector<ExperimentCell> parse_cells_csv(std::string_view content);
std::vector<ExperimentCell> load_cells_csv(const std::filesystem::path& path);

/// One section per k_percent of the resampled cells. Each section is a table
/// with a row group per method (four metric rows each) and a column per
/// (representation, classifier); the `none` cells appear in every section as
/// the original-training-set baseline. Values are percentages, 2 decimals.
std::string format_markdown(std::span<const ExperimentCell> cells);

enum class ReportFormat { csv, markdown };

/// Writes cells.csv or report.md into `out_dir` (created when missing) and
/// returns the file path. Throws when `cells` is empty or the directory is
/// unwritable.
std::filesystem::path emit_report(std::span<const ExperimentCell> cells, ReportFormat format,
                                  const std::filesystem::path& out_dir);

}  // namespace imbalance::harness
