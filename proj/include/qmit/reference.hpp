#pragma once

#include "qmit/circuits.hpp"

#include <Eigen/Dense>

#include <string_view>
#include <vector>

namespace qmit
{

struct Observable
{
	Axis axis;
	int qubit;
};

/// All (axis, qubit) pairs for the given axes, axis-major.
std::vector<Observable> observables_for(const std::vector<Axis>& axes, int num_qubits);

/// values[time index][observable index]
using ValueTable = std::vector<std::vector<double>>;

/// Dense Hamiltonian of the chain:
///   TFIM: H = -h sum_j X_j - J sum_j Z_j Z_{j+1}
///   XY:   H = -h sum_j Z_j - J sum_j (X_j X_{j+1} + Y_j Y_{j+1})
/// Unlike SpinModel::validate, a single spin is accepted here.
Eigen::MatrixXcd hamiltonian(const SpinModel& model);

/// Dense operator of a Pauli on one qubit of an n-qubit register.
Eigen::MatrixXcd pauli_operator(int num_qubits, Axis axis, int qubit);

/// Excitation-number operator sum_j (I - Z_j)/2.
Eigen::MatrixXcd excitation_operator(int num_qubits);

/// Exact propagation exp(-iHt) through a one-off eigendecomposition of H.
class ExactPropagator
{
public:
	explicit ExactPropagator(const SpinModel& model);

	[[nodiscard]] Eigen::VectorXcd evolve(const Eigen::VectorXcd& psi0, double t) const;
	[[nodiscard]] const Eigen::VectorXd& energies() const { return energies_; }
	[[nodiscard]] int num_qubits() const { return num_qubits_; }

private:
	int num_qubits_;
	Eigen::VectorXd energies_;
	Eigen::MatrixXcd vectors_;
};

Eigen::VectorXcd basis_vector(int num_qubits, std::string_view bits);
double pauli_expectation(const Eigen::VectorXcd& psi, int num_qubits, Axis axis, int qubit);

ValueTable exact_expectations(const SpinModel& model, std::string_view init, const std::vector<double>& grid,
                              const std::vector<Observable>& observables);

/// Noise-free N-block Trotter circuit (one circuit per time point, dt = t/N).
ValueTable ideal_trotter_expectations(const SpinModel& model, std::string_view init, int N, const std::vector<double>& grid,
                                      const std::vector<Observable>& observables);

} // namespace qmit
