#pragma once

// Run configuration: an INI file with sections model, schedule, noise,
// sampling, training, post_select, seeds, output, states.

#include "qmit/circuits.hpp"
#include "qmit/mitigator.hpp"
#include "qmit/qsim.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qmit
{

struct NoiseSection
{
	double p1 = 5e-4;
	double p2 = 1.2e-2;
	double e01 = 0.02;
	double e10 = 0.02;
	bool enabled = true;

	[[nodiscard]] NoiseModel model(int num_qubits) const;
};

struct RunConfig
{
	SpinModel model;
	TrotterSchedule schedule; // T defaults to 2/J
	NoiseSection noise;

	std::uint64_t shots = 8192;
	bool exact_mode = false;
	unsigned workers = 1;
	std::vector<Axis> axes; // empty: x,y,z for tfim, z for xy

	TrainConfig training;
	bool training_seed_set = false; // otherwise derived from the master seed

	bool post_select = false;
	int post_select_target = -1; // -1: popcount of each initial state

	std::uint64_t master_seed = 20210613;

	std::filesystem::path output_dir = "out";
	std::vector<std::string> init_states; // empty: full computational basis
	std::string plot_init;                // empty: a per-model default

	[[nodiscard]] std::vector<Axis> feature_axes() const;
	[[nodiscard]] std::vector<std::string> states() const;
	[[nodiscard]] std::string plot_state() const;
	/// Training config with the derived seed filled in.
	[[nodiscard]] TrainConfig train_config() const;
};

/// Every violated field, one message each. Empty when the config is valid.
std::vector<std::string> validation_errors(const RunConfig& cfg);
/// Throws ConfigError listing all violations.
void validate(const RunConfig& cfg);

/// Parses INI text. Unknown sections or keys and malformed values are
/// reported together in one ConfigError.
RunConfig parse_config(std::string_view text, const std::string& source_name = "<memory>");
RunConfig load_config(const std::filesystem::path& path);
std::string config_to_ini(const RunConfig& cfg);

/// Canonical JSON of everything that influences results (not the output
/// directory or worker count).
nlohmann::json canonical_json(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);
/// Hash of the model and schedule only; artifacts that may be compared share it.
std::string lineage_hash(const RunConfig& cfg);

} // namespace qmit
