#pragma once

// File-level commands behind the CLI. Every command reads and writes inside
// cfg.output_dir and is a deterministic function of the config and its inputs.

#include "qmit/config.hpp"
#include "qmit/datasets.hpp"
#include "qmit/metrics.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace qmit
{

namespace fs = std::filesystem;

std::string dataset_file_name(Role role);

fs::path cmd_generate(const RunConfig& cfg, Stage stage);
/// Writes checkpoint.json and loss_log.csv; returns the checkpoint path.
fs::path cmd_train(const RunConfig& cfg, const fs::path& noisy, const fs::path& quasi_ideal);
fs::path cmd_mitigate(const RunConfig& cfg, const fs::path& checkpoint, const fs::path& eval_noisy);
/// exact.jsonl and ideal_trotter.jsonl (N2 real blocks), plus curve CSVs for
/// the plot state.
std::vector<fs::path> cmd_reference(const RunConfig& cfg);

/// One report per (A, B) pair. Refuses pairs whose lineage hashes differ
/// unless force is set.
std::vector<fs::path> cmd_evaluate(const RunConfig& cfg, const std::vector<std::pair<fs::path, fs::path>>& pairs, bool force);
/// Curves of the improved data against ideal Trotter and exact references for
/// the plot state: mean z-magnetization for tfim, half-difference for xy.
fs::path cmd_deviation(const RunConfig& cfg, const fs::path& improved, const fs::path& ideal_trotter, const fs::path& exact, bool force);

/// format "csv" or "svg". Inputs are datasets or reports; several datasets
/// become one chart with a series per role.
std::vector<fs::path> cmd_export(const RunConfig& cfg, const std::vector<fs::path>& inputs, const std::string& format);

struct PipelineSummary
{
	double raw_mse = 0.0;       // eval_noisy vs ideal_trotter, z
	double mitigated_mse = 0.0; // mitigated vs ideal_trotter, z
	std::vector<fs::path> artifacts;
};

/// generate x3 -> reference -> train -> mitigate -> evaluate -> export.
PipelineSummary cmd_pipeline(const RunConfig& cfg);

/// Writes text, creating parent directories.
void write_text(const fs::path& path, const std::string& text);

} // namespace qmit
