#pragma once

#include "qmit/circuits.hpp"
#include "qmit/qsim.hpp"
#include "qmit/reference.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qmit
{

enum class Role { QuasiIdeal, TrainingNoisy, EvalNoisy, Mitigated, Exact, IdealTrotter };

std::string_view role_name(Role r);
Role role_from_name(std::string_view name);
Role role_of(Stage s);

inline constexpr int kDatasetFormatVersion = 1;

struct ObservationRecord
{
	ModelKind model = ModelKind::TFIM;
	int N1 = 0;
	int c = 0;
	BlockLayout layout = BlockLayout::Interleaved;
	Role role = Role::QuasiIdeal;
	std::string init_state;
	int time_index = 0; // 1..K
	double t = 0.0;
	Axis axis = Axis::Z;
	int qubit = 0;
	double value = 0.0;
	std::uint64_t shots = 0; // 0 only in exact-expectation datasets
	std::uint64_t seed = 0;

	friend bool operator==(const ObservationRecord&, const ObservationRecord&) = default;
};

struct RecordKey
{
	std::string init_state;
	int time_index;
	Axis axis;
	int qubit;

	friend auto operator<=>(const RecordKey&, const RecordKey&) = default;
};

RecordKey key_of(const ObservationRecord& r);

struct DatasetMeta
{
	int version = kDatasetFormatVersion;
	Role role = Role::QuasiIdeal;
	SpinModel model;
	TrotterSchedule schedule;
	NoiseModel noise;
	int trotter_blocks = 0; // circuit depth in Trotter blocks behind the values
	std::uint64_t shots = 0;
	bool exact_mode = false;
	std::uint64_t master_seed = 0;
	std::vector<Axis> axes;
	bool post_selected = false;
	int post_select_target = -1; // -1: popcount of each initial state
	std::string config_hash;
	std::string lineage_hash;
	nlohmann::json extra = nlohmann::json::object();

	friend bool operator==(const DatasetMeta&, const DatasetMeta&) = default;
};

struct ObservationDataset
{
	DatasetMeta meta;
	std::vector<ObservationRecord> records;

	/// Distinct initial states in first-appearance order.
	[[nodiscard]] std::vector<std::string> init_states() const;
	/// t for time indices 1..K, stored at [0..K-1].
	[[nodiscard]] std::vector<double> time_points() const;

	friend bool operator==(const ObservationDataset&, const ObservationDataset&) = default;
};

/// Key -> record position. Throws AlignmentError on duplicate keys.
using RecordIndex = std::map<RecordKey, std::size_t>;
RecordIndex index_records(const ObservationDataset& ds);

/// D = 2^Nq * Nq * K * B for full-basis coverage; in general inits * Nq * K * B.
std::size_t expected_dataset_size(std::size_t num_inits, int num_qubits, int K, std::size_t num_axes);

/// All 2^n computational basis states in index order.
std::vector<std::string> all_basis_states(int num_qubits);

/// Default feature axes: x, y, z for TFIM; z for XY.
std::vector<Axis> default_axes(ModelKind kind);

struct GenerateOptions
{
	std::vector<Axis> axes;              // empty: default_axes(model.kind)
	bool exact_mode = false;             // skip sampling, use the readout distribution
	std::optional<int> post_select;      // z-basis post-selection; -1 selects popcount(init)
	unsigned workers = 1;
	std::string config_hash;
	std::string lineage_hash;
};

ObservationDataset generate(const SpinModel& model, const TrotterSchedule& schedule, Stage stage, const NoiseModel& noise,
                            std::uint64_t shots, const std::vector<std::string>& init_states, std::uint64_t seed,
                            const GenerateOptions& options = {});

/// Keeps bitstrings with popcount == target; throws DegeneratePostSelection if
/// nothing survives.
ShotHistogram post_select(const ShotHistogram& h, int target_excitations);

/// Exact-mode counterpart of post_select on a basis-indexed distribution.
std::vector<double> post_select_distribution(const std::vector<double>& probs, int num_qubits, int target_excitations);

struct PairKey
{
	std::string init_state;
	int time_index;

	friend auto operator<=>(const PairKey&, const PairKey&) = default;
};

/// Column p of `inputs` / `targets` belongs to keys[p]. Values are raw
/// magnetizations in [-1, 1] (the network encoding is applied by the mitigator).
struct TrainingPairs
{
	Eigen::MatrixXd inputs;  // K_in x P
	Eigen::MatrixXd targets; // K_out x P
	std::vector<PairKey> keys;
	std::vector<Axis> input_axes;
	int num_qubits = 0;

	[[nodiscard]] Eigen::Index size() const { return inputs.cols(); }
};

/// Input features for every (init, time index) in the dataset, axis-major in
/// `axes` order, then qubit.
Eigen::MatrixXd feature_matrix(const ObservationDataset& ds, const std::vector<Axis>& axes, const std::vector<PairKey>& keys);
std::vector<PairKey> pair_keys(const ObservationDataset& ds);

struct PairingOptions
{
	bool strict_roles = true; // noisy must be training_noisy, target must be quasi_ideal
};

TrainingPairs pair_for_training(const ObservationDataset& noisy, const ObservationDataset& quasi_ideal, const PairingOptions& options = {});

/// Reference curves in dataset form (role exact or ideal_trotter, shots = 0).
ObservationDataset reference_dataset(const SpinModel& model, const TrotterSchedule& schedule, Role role, int trotter_number,
                                     const std::vector<std::string>& init_states, const std::vector<Axis>& axes);

nlohmann::json meta_to_json(const DatasetMeta& meta);
DatasetMeta meta_from_json(const nlohmann::json& j);

std::string to_jsonl(const ObservationDataset& ds);
ObservationDataset dataset_from_jsonl(std::string_view text, const std::string& source_name = "<memory>");
void save(const ObservationDataset& ds, const std::filesystem::path& path);
ObservationDataset load_dataset(const std::filesystem::path& path);
std::string to_csv(const ObservationDataset& ds);

} // namespace qmit
