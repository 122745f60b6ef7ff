#pragma once

#include "qmit/qsim.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace qmit
{

enum class ModelKind { TFIM, XY };

std::string_view model_kind_name(ModelKind k);
ModelKind model_kind_from_name(std::string_view name);

/// Nearest-neighbour open chain with uniform coupling and field.
struct SpinModel
{
	ModelKind kind = ModelKind::TFIM;
	int num_spins = 5;
	double J = 2.0;
	double h = 1.0;

	void validate() const;

	friend bool operator==(const SpinModel&, const SpinModel&) = default;
};

enum class BlockLayout { Interleaved, Appended, Custom };

std::string_view layout_name(BlockLayout l);
BlockLayout layout_from_name(std::string_view name);

enum class BlockKind { Real, Empty };

enum class Stage { QuasiIdeal, TrainingNoisy, EvalNoisy };

std::string_view stage_name(Stage s); // role names: quasi_ideal, training_noisy, eval_noisy
Stage stage_from_name(std::string_view name); // accepts role names and dashed CLI spellings

struct TrotterSchedule
{
	int N1 = 2;
	int c = 2;
	double T = 1.0;
	int K = 20;
	BlockLayout layout = BlockLayout::Interleaved;
	/// Custom layout only: a permutation of the N2 block slots; slot s holds a
	/// Real block iff custom_permutation[s] < N1.
	std::vector<int> custom_permutation;
	double epsilon_angle = 0.0;

	[[nodiscard]] int N2() const { return c * N1; }
	/// t_i = i T / K for i = 1..K
	[[nodiscard]] std::vector<double> time_grid() const;

	void validate() const;

	friend bool operator==(const TrotterSchedule&, const TrotterSchedule&) = default;
};

enum class NoiseTag { OneQubit, TwoQubit };

struct GateSequence
{
	int num_qubits = 0;
	std::vector<Gate> gates;
	std::vector<NoiseTag> tags;
	std::vector<BlockKind> blocks; // block layout the sequence was assembled from

	void push(Gate g);
	void append(const GateSequence& other);
	[[nodiscard]] std::size_t size() const { return gates.size(); }
};

/// First-order Trotter step of length dt. Rotation angles are phi1 = 2 h dt
/// and phi2 = 2 J dt with R(phi) = exp(-i phi P / 2), so the step is the
/// split propagator of -H for H = hamiltonian(model). Both chains are real in
/// the computational basis, hence from basis-state inputs X and Z
/// expectations match exp(-iHt) evolution while Y changes sign.
GateSequence trotter_step(const SpinModel& model, double dt);

/// Same gate skeleton as trotter_step with every rotation angle set to
/// epsilon_angle (|epsilon_angle| <= 1e-2).
GateSequence empty_step(const SpinModel& model, double epsilon_angle);

/// Block pattern of a stage: N1 Real blocks for QuasiIdeal, N2 blocks for the
/// others (TrainingNoisy mixes Real and Empty per layout).
std::vector<BlockKind> block_layout(const TrotterSchedule& schedule, Stage stage);

GateSequence build_circuit(const SpinModel& model, const TrotterSchedule& schedule, double t, Stage stage);

/// Runs a gate sequence on a density matrix; with noise enabled, each gate is
/// followed by a depolarizing channel on its targets (p1 or p2 by tag).
void run_sequence(DensityMatrix& rho, const GateSequence& seq, const NoiseModel& noise);
DensityMatrix simulate(const GateSequence& seq, std::string_view init_bits, const NoiseModel& noise);

/// Dense unitary of a noise-free sequence (debug and oracle use; <= 6 qubits).
Eigen::MatrixXcd sequence_unitary(const GateSequence& seq);

/// One JSON object per line: {"kind":..,"targets":[..],"angle":..}.
std::string to_jsonl(const GateSequence& seq);
GateSequence from_jsonl(std::string_view text, int num_qubits);

} // namespace qmit
