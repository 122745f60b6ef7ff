#pragma once

// Density-matrix simulator for small registers (<= 6 qubits): ideal gates,
// depolarizing channels, readout confusion and shot sampling.
//
// Qubit 0 is the leftmost character of every bitstring and the most
// significant bit of the basis index.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace qmit
{

using cx = std::complex<double>;

inline constexpr int kMaxQubits = 6;

enum class Axis { X, Y, Z };

char axis_char(Axis a);
Axis axis_from_char(char c);

enum class GateKind { RX, RZ, X, H, S, SDG, CNOT };

std::string_view gate_kind_name(GateKind k);
GateKind gate_kind_from_name(std::string_view name);

struct Gate
{
	GateKind kind;
	std::vector<int> targets; // CNOT: {control, target}
	double angle = 0.0;       // RX/RZ only

	static Gate rx(int q, double angle) { return {GateKind::RX, {q}, angle}; }
	static Gate rz(int q, double angle) { return {GateKind::RZ, {q}, angle}; }
	static Gate x(int q) { return {GateKind::X, {q}, 0.0}; }
	static Gate h(int q) { return {GateKind::H, {q}, 0.0}; }
	static Gate s(int q) { return {GateKind::S, {q}, 0.0}; }
	static Gate sdg(int q) { return {GateKind::SDG, {q}, 0.0}; }
	static Gate cnot(int control, int target) { return {GateKind::CNOT, {control, target}, 0.0}; }

	[[nodiscard]] bool is_rotation() const { return kind == GateKind::RX || kind == GateKind::RZ; }
	[[nodiscard]] bool is_two_qubit() const { return kind == GateKind::CNOT; }

	/// Throws ArgumentError unless arity and target range are consistent.
	void validate(int num_qubits) const;

	friend bool operator==(const Gate&, const Gate&) = default;
};

/// 2x2 unitary of a single-qubit gate.
Eigen::Matrix2cd single_qubit_unitary(const Gate& g);

struct ReadoutError
{
	double e01 = 0.0; // P(read 1 | true 0)
	double e10 = 0.0; // P(read 0 | true 1)

	friend bool operator==(const ReadoutError&, const ReadoutError&) = default;
};

struct NoiseModel
{
	double p1 = 0.0;
	double p2 = 0.0;
	std::vector<ReadoutError> readout; // per qubit; empty means no readout error
	bool enabled = false;

	static NoiseModel none() { return {}; }
	/// Default synthetic calibration: p1 = 5e-4, p2 = 1.2e-2, e01 = e10 = 0.02.
	static NoiseModel default_profile(int num_qubits);
	static NoiseModel uniform(int num_qubits, double p1, double p2, double e01, double e10);

	void validate() const;
	[[nodiscard]] ReadoutError readout_for(int qubit) const;

	friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

class DensityMatrix
{
public:
	DensityMatrix(int num_qubits, Eigen::MatrixXcd entries);

	[[nodiscard]] int num_qubits() const { return num_qubits_; }
	[[nodiscard]] Eigen::Index dim() const { return rho_.rows(); }
	[[nodiscard]] const Eigen::MatrixXcd& entries() const { return rho_; }

	[[nodiscard]] double trace() const { return rho_.trace().real(); }
	[[nodiscard]] double purity() const;
	[[nodiscard]] double hermiticity_defect() const;
	[[nodiscard]] double min_eigenvalue() const;
	[[nodiscard]] std::vector<double> diagonal_probabilities() const;

	// In-place kernels used by the circuit runner. The free functions below
	// wrap them with value semantics.
	void apply(const Gate& g);
	void depolarize(const std::vector<int>& qubits, double p);

private:
	void apply_single(int q, const Eigen::Matrix2cd& u);
	void apply_cnot(int control, int target);

	int num_qubits_;
	Eigen::MatrixXcd rho_;
};

/// Mask of qubit q inside a basis index.
inline std::uint64_t qubit_mask(int num_qubits, int q) { return std::uint64_t{1} << static_cast<unsigned>(num_qubits - 1 - q); }

std::string index_to_bits(std::uint64_t index, int num_qubits);
std::uint64_t bits_to_index(std::string_view bits);
int popcount_bits(std::string_view bits);

DensityMatrix basis_state(int num_qubits, std::string_view bits);
DensityMatrix apply_gate(const DensityMatrix& rho, const Gate& g);
DensityMatrix apply_depolarizing(const DensityMatrix& rho, const std::vector<int>& qubits, double p);
double expectation_pauli(const DensityMatrix& rho, Axis axis, int qubit);

struct ShotHistogram
{
	int num_qubits = 0;
	std::map<std::string, std::uint64_t> counts;
	std::uint64_t shots = 0;

	friend bool operator==(const ShotHistogram&, const ShotHistogram&) = default;
};

ShotHistogram sample_counts(const DensityMatrix& rho, std::uint64_t shots, const NoiseModel& noise, std::uint64_t seed);
double expectation_from_counts(const ShotHistogram& h, Axis axis, int qubit, bool prerotated);

/// Exact outcome distribution after readout confusion (the shots -> infinity
/// limit of sample_counts), indexed by basis index.
std::vector<double> readout_distribution(const DensityMatrix& rho, const NoiseModel& noise);
/// (P(bit=0) - P(bit=1)) on one qubit of a basis-indexed distribution.
double parity_expectation(const std::vector<double>& probs, int num_qubits, int qubit);

/// Gates that rotate the measurement basis of `axis` onto Z (H for X, S^dag then H for Y).
std::vector<Gate> measurement_prerotation(Axis axis, int qubit);

} // namespace qmit
