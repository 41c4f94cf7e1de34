#include "imbalance/harness/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "imbalance/error.hpp"
#include "imbalance/harness/config.hpp"
#include "imbalance/harness/experiment.hpp"
#include "imbalance/harness/report.hpp"
#include "imbalance/harness/synthetic.hpp"
#include "imbalance/simd/kernels.hpp"

namespace imbalance::harness {

namespace {

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<std::string> overrides;
  bool timing = false;
  std::optional<std::size_t> threads;
};

int command_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  const std::filesystem::path config_path = args.config;
  auto kv = KeyValueFile::load(config_path);
  for (const auto& item : args.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + item + "'");
    kv.set(item.substr(0, eq), item.substr(eq + 1));
  }
  auto cfg = config_from_pairs(kv, config_path.parent_path());
  if (args.seed) cfg.seed = *args.seed;
  if (args.out) cfg.out_dir = *args.out;
  if (args.timing) cfg.timing = true;
  if (args.threads) cfg.threads = *args.threads;
  cfg.validate();

  const auto cells = run_experiment(cfg);
  std::vector<std::string> seen;
  for (const auto& cell : cells) {
    for (const auto& w : cell.warnings) {
      if (std::find(seen.begin(), seen.end(), w) != seen.end()) continue;
      seen.push_back(w);
      err << "warning: " << w << '\n';
    }
  }
  const auto csv = emit_report(cells, ReportFormat::csv, cfg.out_dir);
  const auto md = emit_report(cells, ReportFormat::markdown, cfg.out_dir);
  out << cells.size() << " cells\n" << csv.string() << '\n' << md.string() << '\n';
  return kExitOk;
}

int command_synth(const std::string& spec, const std::string& target, std::ostream& out) {
  const auto file = load_synth_spec(spec);
  run_synth(file, target);
  out << target << '\n';
  return kExitOk;
}

int command_report(const std::string& cells_path, const std::string& format, std::ostream& out) {
  const auto cells = load_cells_csv(cells_path);
  if (cells.empty()) throw Error("no cells in " + cells_path);
  out << (format == "csv" ? format_cells_csv(cells) : format_markdown(cells));
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Oversampling benchmark for imbalanced text classification", "imbalance-bench"};
  app.require_subcommand(1);
  std::string simd;
  app.add_option("--simd", simd, "Kernel set: scalar, avx2 or neon (default: best available)");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run the experiment grid and write cells.csv and report.md");
  run_cmd->add_option("--config", run.config, "Experiment config file")->required();
  run_cmd->add_option("--seed", run.seed, "Master seed (overrides the config)");
  run_cmd->add_option("--out", run.out, "Output directory (overrides the config)");
  run_cmd->add_option("--set", run.overrides, "Override a config key, as key=value");
  run_cmd->add_flag("--timing", run.timing, "Record wall time per cell");
  run_cmd->add_option("--threads", run.threads, "Worker threads");

  std::string spec_path, synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus or numeric matrix");
  synth_cmd->add_option("--spec", spec_path, "Synthetic spec file")->required();
  synth_cmd->add_option("--out", synth_out, "Output file")->required();

  std::string cells_path, format = "markdown";
  auto* report_cmd = app.add_subcommand("report", "Render a cells CSV");
  report_cmd->add_option("--cells", cells_path, "cells.csv from a run")->required();
  report_cmd->add_option("--format", format, "markdown or csv")->check(CLI::IsMember({"markdown", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (!simd.empty()) simd::set_active_isa(simd::parse_isa(simd));
  } catch (const std::exception& e) {
    err << "error: --simd: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*run_cmd) return command_run(run, out, err);
    if (*synth_cmd) return command_synth(spec_path, synth_out, out);
    return command_report(cells_path, format, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace imbalance::harness
