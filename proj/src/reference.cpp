#include "qmit/reference.hpp"

#include "qmit/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>

namespace qmit
{

std::vector<Observable> observables_for(const std::vector<Axis>& axes, int num_qubits)
{
	std::vector<Observable> obs;
	for(const auto a : axes)
	{
		for(int q = 0; q < num_qubits; ++q) { obs.push_back({a, q}); }
	}
	return obs;
}

Eigen::MatrixXcd pauli_operator(int num_qubits, Axis axis, int qubit)
{
	const Eigen::Index d = Eigen::Index{1} << num_qubits;
	const auto m = static_cast<Eigen::Index>(qubit_mask(num_qubits, qubit));
	Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d, d);
	for(Eigen::Index k = 0; k < d; ++k)
	{
		const bool one = (k & m) != 0;
		switch(axis)
		{
		case Axis::Z: p(k, k) = one ? -1.0 : 1.0; break;
		case Axis::X: p(k ^ m, k) = 1.0; break;
		case Axis::Y: p(k ^ m, k) = one ? cx{0.0, -1.0} : cx{0.0, 1.0}; break;
		}
	}
	return p;
}

Eigen::MatrixXcd excitation_operator(int num_qubits)
{
	const Eigen::Index d = Eigen::Index{1} << num_qubits;
	Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(d, d);
	for(Eigen::Index k = 0; k < d; ++k) { n(k, k) = static_cast<double>(std::popcount(static_cast<std::uint64_t>(k))); }
	return n;
}

Eigen::MatrixXcd hamiltonian(const SpinModel& model)
{
	const int n = model.num_spins;
	if(n > kMaxQubits) { throw CapabilityError("Hamiltonians above " + std::to_string(kMaxQubits) + " spins are not supported"); }
	if(n < 1) { throw ArgumentError("num_spins must be positive"); }
	const Eigen::Index d = Eigen::Index{1} << n;
	Eigen::MatrixXcd hm = Eigen::MatrixXcd::Zero(d, d);
	const Axis field_axis = model.kind == ModelKind::TFIM ? Axis::X : Axis::Z;
	for(int j = 0; j < n; ++j) { hm -= model.h * pauli_operator(n, field_axis, j); }
	for(int j = 0; j + 1 < n; ++j)
	{
		if(model.kind == ModelKind::TFIM) { hm -= model.J * pauli_operator(n, Axis::Z, j) * pauli_operator(n, Axis::Z, j + 1); }
		else
		{
			hm -= model.J * (pauli_operator(n, Axis::X, j) * pauli_operator(n, Axis::X, j + 1) +
			                 pauli_operator(n, Axis::Y, j) * pauli_operator(n, Axis::Y, j + 1));
		}
	}
	return hm;
}

ExactPropagator::ExactPropagator(const SpinModel& model) : num_qubits_{model.num_spins}
{
	const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hamiltonian(model));
	energies_ = es.eigenvalues();
	vectors_ = es.eigenvectors();
}

Eigen::VectorXcd ExactPropagator::evolve(const Eigen::VectorXcd& psi0, double t) const
{
	if(t == 0.0) { return psi0; } // skip the V V^dagger roundoff
	Eigen::VectorXcd coeff = vectors_.adjoint() * psi0;
	for(Eigen::Index k = 0; k < coeff.size(); ++k) { coeff(k) *= std::exp(cx{0.0, -energies_(k) * t}); }
	return vectors_ * coeff;
}

Eigen::VectorXcd basis_vector(int num_qubits, std::string_view bits)
{
	if(static_cast<int>(bits.size()) != num_qubits) { throw ArgumentError("bitstring length does not match qubit count"); }
	Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << num_qubits);
	v(static_cast<Eigen::Index>(bits_to_index(bits))) = 1.0;
	return v;
}

double pauli_expectation(const Eigen::VectorXcd& psi, int num_qubits, Axis axis, int qubit)
{
	const auto m = static_cast<Eigen::Index>(qubit_mask(num_qubits, qubit));
	cx acc = 0.0;
	for(Eigen::Index k = 0; k < psi.size(); ++k)
	{
		const bool one = (k & m) != 0;
		switch(axis)
		{
		case Axis::Z: acc += std::norm(psi(k)) * (one ? -1.0 : 1.0); break;
		case Axis::X: acc += std::conj(psi(k ^ m)) * psi(k); break;
		case Axis::Y: acc += std::conj(psi(k ^ m)) * psi(k) * (one ? cx{0.0, -1.0} : cx{0.0, 1.0}); break;
		}
	}
	return acc.real();
}

ValueTable exact_expectations(const SpinModel& model, std::string_view init, const std::vector<double>& grid,
                              const std::vector<Observable>& observables)
{
	const ExactPropagator prop(model);
	const int n = model.num_spins;
	const Eigen::VectorXcd psi0 = basis_vector(n, init);
	ValueTable table;
	table.reserve(grid.size());
	for(const double t : grid)
	{
		const Eigen::VectorXcd psi = prop.evolve(psi0, t);
		std::vector<double> row;
		row.reserve(observables.size());
		for(const auto& o : observables) { row.push_back(pauli_expectation(psi, n, o.axis, o.qubit)); }
		table.push_back(std::move(row));
	}
	return table;
}

ValueTable ideal_trotter_expectations(const SpinModel& model, std::string_view init, int N, const std::vector<double>& grid,
                                      const std::vector<Observable>& observables)
{
	if(N < 1) { throw ArgumentError("Trotter number must be >= 1"); }
	TrotterSchedule sched;
	sched.N1 = N;
	sched.c = 1;
	sched.T = grid.empty() ? 1.0 : *std::max_element(grid.begin(), grid.end());
	const NoiseModel off = NoiseModel::none();
	ValueTable table;
	table.reserve(grid.size());
	for(const double t : grid)
	{
		const DensityMatrix rho = simulate(build_circuit(model, sched, t, Stage::EvalNoisy), init, off);
		std::vector<double> row;
		row.reserve(observables.size());
		for(const auto& o : observables) { row.push_back(expectation_pauli(rho, o.axis, o.qubit)); }
		table.push_back(std::move(row));
	}
	return table;
}

} // namespace qmit
