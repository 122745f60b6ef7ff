#include "qmit/qsim.hpp"

#include "qmit/errors.hpp"
#include "qmit/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace qmit
{

char axis_char(Axis a)
{
	switch(a)
	{
	case Axis::X: return 'x';
	case Axis::Y: return 'y';
	case Axis::Z: return 'z';
	}
	return '?';
}

Axis axis_from_char(char c)
{
	switch(c)
	{
	case 'x':
	case 'X': return Axis::X;
	case 'y':
	case 'Y': return Axis::Y;
	case 'z':
	case 'Z': return Axis::Z;
	default: throw ArgumentError(std::string("unknown axis '") + c + "'");
	}
}

std::string_view gate_kind_name(GateKind k)
{
	switch(k)
	{
	case GateKind::RX: return "RX";
	case GateKind::RZ: return "RZ";
	case GateKind::X: return "X";
	case GateKind::H: return "H";
	case GateKind::S: return "S";
	case GateKind::SDG: return "SDG";
	case GateKind::CNOT: return "CNOT";
	}
	return "?";
}

GateKind gate_kind_from_name(std::string_view name)
{
	for(auto k : {GateKind::RX, GateKind::RZ, GateKind::X, GateKind::H, GateKind::S, GateKind::SDG, GateKind::CNOT})
	{
		if(gate_kind_name(k) == name) { return k; }
	}
	throw ArgumentError("unknown gate kind '" + std::string(name) + "'");
}

void Gate::validate(int num_qubits) const
{
	const std::size_t arity = is_two_qubit() ? 2 : 1;
	if(targets.size() != arity)
	{
		throw ArgumentError(std::string(gate_kind_name(kind)) + " expects " + std::to_string(arity) + " target(s)");
	}
	for(const int q : targets)
	{
		if(q < 0 || q >= num_qubits) { throw ArgumentError("gate target " + std::to_string(q) + " out of range"); }
	}
	if(arity == 2 && targets[0] == targets[1]) { throw ArgumentError("CNOT control and target coincide"); }
}

Eigen::Matrix2cd single_qubit_unitary(const Gate& g)
{
	using std::numbers::sqrt2;
	const cx i{0.0, 1.0};
	Eigen::Matrix2cd u;
	switch(g.kind)
	{
	case GateKind::RX:
	{
		const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
		u << c, -i * s, -i * s, c;
		break;
	}
	case GateKind::RZ: u << std::exp(-i * (g.angle / 2)), 0.0, 0.0, std::exp(i * (g.angle / 2)); break;
	case GateKind::X: u << 0.0, 1.0, 1.0, 0.0; break;
	case GateKind::H: u << 1.0 / sqrt2, 1.0 / sqrt2, 1.0 / sqrt2, -1.0 / sqrt2; break;
	case GateKind::S: u << 1.0, 0.0, 0.0, i; break;
	case GateKind::SDG: u << 1.0, 0.0, 0.0, -i; break;
	case GateKind::CNOT: throw ArgumentError("CNOT is not a single-qubit gate");
	}
	return u;
}

NoiseModel NoiseModel::default_profile(int num_qubits) { return uniform(num_qubits, 5e-4, 1.2e-2, 0.02, 0.02); }

NoiseModel NoiseModel::uniform(int num_qubits, double p1, double p2, double e01, double e10)
{
	NoiseModel m;
	m.p1 = p1;
	m.p2 = p2;
	m.readout.assign(static_cast<std::size_t>(num_qubits), ReadoutError{e01, e10});
	m.enabled = true;
	return m;
}

void NoiseModel::validate() const
{
	auto check = [](double p, const char* name) {
		if(!(p >= 0.0 && p <= 1.0)) { throw ArgumentError(std::string("noise probability ") + name + " outside [0,1]"); }
	};
	check(p1, "p1");
	check(p2, "p2");
	for(const auto& r : readout)
	{
		check(r.e01, "e01");
		check(r.e10, "e10");
	}
}

ReadoutError NoiseModel::readout_for(int qubit) const
{
	if(!enabled || readout.empty()) { return {}; }
	return readout.at(static_cast<std::size_t>(qubit));
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(int num_qubits, Eigen::MatrixXcd entries) : num_qubits_{num_qubits}, rho_{std::move(entries)}
{
	if(num_qubits < 1 || num_qubits > kMaxQubits)
	{
		throw CapabilityError("density matrices support 1.." + std::to_string(kMaxQubits) + " qubits");
	}
	const Eigen::Index d = Eigen::Index{1} << num_qubits;
	if(rho_.rows() != d || rho_.cols() != d) { throw ArgumentError("density matrix shape does not match qubit count"); }
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

double DensityMatrix::hermiticity_defect() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

double DensityMatrix::min_eigenvalue() const
{
	const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
	return es.eigenvalues().minCoeff();
}

std::vector<double> DensityMatrix::diagonal_probabilities() const
{
	std::vector<double> p(static_cast<std::size_t>(dim()));
	for(Eigen::Index k = 0; k < dim(); ++k) { p[static_cast<std::size_t>(k)] = rho_(k, k).real(); }
	return p;
}

void DensityMatrix::apply(const Gate& g)
{
	g.validate(num_qubits_);
	if(g.kind == GateKind::CNOT) { apply_cnot(g.targets[0], g.targets[1]); }
	else { apply_single(g.targets[0], single_qubit_unitary(g)); }
}

void DensityMatrix::apply_single(int q, const Eigen::Matrix2cd& u)
{
	const auto m = static_cast<Eigen::Index>(qubit_mask(num_qubits_, q));
	const Eigen::Index d = dim();
	// rho <- U rho
	for(Eigen::Index c = 0; c < d; ++c)
	{
		for(Eigen::Index r0 = 0; r0 < d; ++r0)
		{
			if(r0 & m) { continue; }
			const Eigen::Index r1 = r0 | m;
			const cx a = rho_(r0, c), b = rho_(r1, c);
			rho_(r0, c) = u(0, 0) * a + u(0, 1) * b;
			rho_(r1, c) = u(1, 0) * a + u(1, 1) * b;
		}
	}
	// rho <- rho U^dag
	const Eigen::Matrix2cd ud = u.conjugate();
	for(Eigen::Index c0 = 0; c0 < d; ++c0)
	{
		if(c0 & m) { continue; }
		const Eigen::Index c1 = c0 | m;
		for(Eigen::Index r = 0; r < d; ++r)
		{
			const cx a = rho_(r, c0), b = rho_(r, c1);
			rho_(r, c0) = a * ud(0, 0) + b * ud(0, 1);
			rho_(r, c1) = a * ud(1, 0) + b * ud(1, 1);
		}
	}
}

void DensityMatrix::apply_cnot(int control, int target)
{
	const auto cm = static_cast<Eigen::Index>(qubit_mask(num_qubits_, control));
	const auto tm = static_cast<Eigen::Index>(qubit_mask(num_qubits_, target));
	const Eigen::Index d = dim();
	std::vector<Eigen::Index> perm(static_cast<std::size_t>(d));
	for(Eigen::Index k = 0; k < d; ++k) { perm[static_cast<std::size_t>(k)] = (k & cm) ? (k ^ tm) : k; }
	Eigen::MatrixXcd out(d, d);
	for(Eigen::Index c = 0; c < d; ++c)
	{
		for(Eigen::Index r = 0; r < d; ++r) { out(r, c) = rho_(perm[static_cast<std::size_t>(r)], perm[static_cast<std::size_t>(c)]); }
	}
	rho_ = std::move(out);
}

// Depolarizing with total Pauli weight p over the 4^n - 1 non-identity Paulis
// on n = |qubits| qubits is
//   rho' = (1 - p 4^n/(4^n-1)) rho + p 4^n/(4^n-1) (I/2^n (x) Tr_qubits rho).
void DensityMatrix::depolarize(const std::vector<int>& qubits, double p)
{
	if(!(p >= 0.0 && p <= 1.0)) { throw ArgumentError("depolarizing probability outside [0,1]"); }
	if(qubits.empty() || qubits.size() > 2) { throw ArgumentError("depolarizing acts on 1 or 2 qubits"); }
	if(qubits.size() == 2 && qubits[0] == qubits[1]) { throw ArgumentError("depolarizing qubits coincide"); }
	Eigen::Index mask = 0;
	for(const int q : qubits)
	{
		if(q < 0 || q >= num_qubits_) { throw ArgumentError("depolarizing qubit out of range"); }
		mask |= static_cast<Eigen::Index>(qubit_mask(num_qubits_, q));
	}
	if(p == 0.0) { return; }

	const double paulis = qubits.size() == 1 ? 4.0 : 16.0;
	const double lambda = p * paulis / (paulis - 1.0);

	// Enumerate the sub-register assignments of the masked bits.
	std::vector<Eigen::Index> offsets{0};
	for(const int q : qubits)
	{
		const auto m = static_cast<Eigen::Index>(qubit_mask(num_qubits_, q));
		const std::size_t n = offsets.size();
		for(std::size_t k = 0; k < n; ++k) { offsets.push_back(offsets[k] | m); }
	}
	const double inv = 1.0 / static_cast<double>(offsets.size());

	const Eigen::Index d = dim();
	Eigen::MatrixXcd out = (1.0 - lambda) * rho_;
	for(Eigen::Index c = 0; c < d; ++c)
	{
		for(Eigen::Index r = 0; r < d; ++r)
		{
			if(((r ^ c) & mask) != 0) { continue; }
			const Eigen::Index rb = r & ~mask, cb = c & ~mask;
			cx acc = 0.0;
			for(const auto o : offsets) { acc += rho_(rb | o, cb | o); }
			out(r, c) += lambda * inv * acc;
		}
	}
	rho_ = std::move(out);
}

// ---------------------------------------------------------------------------

std::string index_to_bits(std::uint64_t index, int num_qubits)
{
	std::string s(static_cast<std::size_t>(num_qubits), '0');
	for(int q = 0; q < num_qubits; ++q)
	{
		if(index & qubit_mask(num_qubits, q)) { s[static_cast<std::size_t>(q)] = '1'; }
	}
	return s;
}

std::uint64_t bits_to_index(std::string_view bits)
{
	std::uint64_t idx = 0;
	for(const char c : bits)
	{
		if(c != '0' && c != '1') { throw ArgumentError("bitstring contains '" + std::string(1, c) + "'"); }
		idx = (idx << 1U) | static_cast<std::uint64_t>(c == '1');
	}
	return idx;
}

int popcount_bits(std::string_view bits) { return static_cast<int>(std::ranges::count(bits, '1')); }

DensityMatrix basis_state(int num_qubits, std::string_view bits)
{
	if(static_cast<int>(bits.size()) != num_qubits)
	{
		throw ArgumentError("bitstring length " + std::to_string(bits.size()) + " != num_qubits " + std::to_string(num_qubits));
	}
	if(num_qubits < 1 || num_qubits > kMaxQubits) { throw CapabilityError("unsupported qubit count"); }
	const Eigen::Index d = Eigen::Index{1} << num_qubits;
	Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
	const auto k = static_cast<Eigen::Index>(bits_to_index(bits));
	rho(k, k) = 1.0;
	return {num_qubits, std::move(rho)};
}

DensityMatrix apply_gate(const DensityMatrix& rho, const Gate& g)
{
	DensityMatrix out = rho;
	out.apply(g);
	return out;
}

DensityMatrix apply_depolarizing(const DensityMatrix& rho, const std::vector<int>& qubits, double p)
{
	DensityMatrix out = rho;
	out.depolarize(qubits, p);
	return out;
}

double expectation_pauli(const DensityMatrix& rho, Axis axis, int qubit)
{
	const int n = rho.num_qubits();
	if(qubit < 0 || qubit >= n) { throw ArgumentError("qubit index out of range"); }
	const auto m = static_cast<Eigen::Index>(qubit_mask(n, qubit));
	const auto& r = rho.entries();
	cx acc = 0.0;
	for(Eigen::Index k = 0; k < rho.dim(); ++k)
	{
		const bool one = (k & m) != 0;
		switch(axis)
		{
		case Axis::Z: acc += one ? -r(k, k) : r(k, k); break;
		// Tr(rho P) = sum_k (P rho)_{kk} = sum_k P_{k,k^m} rho_{k^m,k}
		case Axis::X: acc += r(k ^ m, k); break;
		case Axis::Y: acc += (one ? cx{0.0, 1.0} : cx{0.0, -1.0}) * r(k ^ m, k); break;
		}
	}
	return acc.real();
}

// ---------------------------------------------------------------------------

ShotHistogram sample_counts(const DensityMatrix& rho, std::uint64_t shots, const NoiseModel& noise, std::uint64_t seed)
{
	if(shots == 0) { throw ArgumentError("shots must be positive"); }
	if(std::abs(rho.trace() - 1.0) > 1e-8) { throw StateError("density matrix is not normalized"); }
	const int n = rho.num_qubits();
	const auto probs = rho.diagonal_probabilities();

	std::vector<double> cdf(probs.size());
	double acc = 0.0;
	for(std::size_t k = 0; k < probs.size(); ++k)
	{
		acc += std::max(probs[k], 0.0);
		cdf[k] = acc;
	}

	std::vector<ReadoutError> ro(static_cast<std::size_t>(n));
	for(int q = 0; q < n; ++q) { ro[static_cast<std::size_t>(q)] = noise.readout_for(q); }

	Rng rng{seed};
	std::vector<std::uint64_t> tally(probs.size(), 0);
	for(std::uint64_t s = 0; s < shots; ++s)
	{
		const double u = rng.uniform() * acc;
		auto k = static_cast<std::uint64_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
		k = std::min<std::uint64_t>(k, probs.size() - 1);
		for(int q = 0; q < n; ++q)
		{
			const auto& e = ro[static_cast<std::size_t>(q)];
			const std::uint64_t m = qubit_mask(n, q);
			const double flip = (k & m) ? e.e10 : e.e01;
			if(flip > 0.0 && rng.bernoulli(flip)) { k ^= m; }
		}
		++tally[k];
	}

	ShotHistogram h;
	h.num_qubits = n;
	h.shots = shots;
	for(std::size_t k = 0; k < tally.size(); ++k)
	{
		if(tally[k] != 0) { h.counts.emplace(index_to_bits(k, n), tally[k]); }
	}
	return h;
}

double expectation_from_counts(const ShotHistogram& h, Axis axis, int qubit, bool prerotated)
{
	if(axis != Axis::Z && !prerotated)
	{
		throw ContractError(std::string("axis ") + axis_char(axis) + " requires a basis pre-rotation before sampling");
	}
	if(qubit < 0 || qubit >= h.num_qubits) { throw ArgumentError("qubit index out of range"); }
	if(h.shots == 0) { throw ArgumentError("empty histogram"); }
	std::int64_t even = 0, odd = 0;
	for(const auto& [bits, n] : h.counts)
	{
		if(bits[static_cast<std::size_t>(qubit)] == '1') { odd += static_cast<std::int64_t>(n); }
		else { even += static_cast<std::int64_t>(n); }
	}
	return static_cast<double>(even - odd) / static_cast<double>(h.shots);
}

std::vector<double> readout_distribution(const DensityMatrix& rho, const NoiseModel& noise)
{
	const int n = rho.num_qubits();
	std::vector<double> p = rho.diagonal_probabilities();
	for(auto& v : p) { v = std::max(v, 0.0); }
	for(int q = 0; q < n; ++q)
	{
		const auto e = noise.readout_for(q);
		if(e.e01 == 0.0 && e.e10 == 0.0) { continue; }
		const std::uint64_t m = qubit_mask(n, q);
		for(std::uint64_t k = 0; k < p.size(); ++k)
		{
			if(k & m) { continue; }
			const double p0 = p[k], p1 = p[k | m];
			p[k] = p0 * (1.0 - e.e01) + p1 * e.e10;
			p[k | m] = p0 * e.e01 + p1 * (1.0 - e.e10);
		}
	}
	return p;
}

double parity_expectation(const std::vector<double>& probs, int num_qubits, int qubit)
{
	const std::uint64_t m = qubit_mask(num_qubits, qubit);
	double acc = 0.0, total = 0.0;
	for(std::uint64_t k = 0; k < probs.size(); ++k)
	{
		acc += (k & m) ? -probs[k] : probs[k];
		total += probs[k];
	}
	return acc / total;
}

std::vector<Gate> measurement_prerotation(Axis axis, int qubit)
{
	switch(axis)
	{
	case Axis::X: return {Gate::h(qubit)};
	case Axis::Y: return {Gate::sdg(qubit), Gate::h(qubit)};
	case Axis::Z: return {};
	}
	return {};
}

} // namespace qmit
