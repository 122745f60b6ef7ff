#include "qmit/circuits.hpp"

#include "qmit/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmit
{

std::string_view model_kind_name(ModelKind k) { return k == ModelKind::TFIM ? "tfim" : "xy"; }

ModelKind model_kind_from_name(std::string_view name)
{
	if(name == "tfim" || name == "TFIM") { return ModelKind::TFIM; }
	if(name == "xy" || name == "XY") { return ModelKind::XY; }
	throw ArgumentError("unknown model kind '" + std::string(name) + "'");
}

void SpinModel::validate() const
{
	if(num_spins < 2) { throw ArgumentError("spin chain needs at least 2 spins"); }
	if(num_spins > kMaxQubits) { throw CapabilityError("spin chains longer than " + std::to_string(kMaxQubits) + " are not supported"); }
	if(!std::isfinite(J) || !std::isfinite(h)) { throw ArgumentError("J and h must be finite"); }
}

std::string_view layout_name(BlockLayout l)
{
	switch(l)
	{
	case BlockLayout::Interleaved: return "interleaved";
	case BlockLayout::Appended: return "appended";
	case BlockLayout::Custom: return "custom";
	}
	return "?";
}

BlockLayout layout_from_name(std::string_view name)
{
	for(auto l : {BlockLayout::Interleaved, BlockLayout::Appended, BlockLayout::Custom})
	{
		if(layout_name(l) == name) { return l; }
	}
	throw ArgumentError("unknown block layout '" + std::string(name) + "'");
}

std::string_view stage_name(Stage s)
{
	switch(s)
	{
	case Stage::QuasiIdeal: return "quasi_ideal";
	case Stage::TrainingNoisy: return "training_noisy";
	case Stage::EvalNoisy: return "eval_noisy";
	}
	return "?";
}

Stage stage_from_name(std::string_view name)
{
	std::string s(name);
	std::ranges::replace(s, '-', '_');
	for(auto st : {Stage::QuasiIdeal, Stage::TrainingNoisy, Stage::EvalNoisy})
	{
		if(stage_name(st) == s) { return st; }
	}
	throw ArgumentError("unknown stage '" + std::string(name) + "'");
}

std::vector<double> TrotterSchedule::time_grid() const
{
	std::vector<double> grid(static_cast<std::size_t>(K));
	for(int i = 1; i <= K; ++i) { grid[static_cast<std::size_t>(i - 1)] = static_cast<double>(i) * T / static_cast<double>(K); }
	return grid;
}

void TrotterSchedule::validate() const
{
	if(N1 < 1) { throw ArgumentError("N1 must be >= 1"); }
	if(c < 1) { throw ArgumentError("c must be >= 1"); }
	if(!(T > 0.0)) { throw ArgumentError("T must be positive"); }
	if(K < 1) { throw ArgumentError("K must be >= 1"); }
	if(std::abs(epsilon_angle) > 1e-2) { throw ArgumentError("epsilon_angle magnitude exceeds 1e-2"); }
	if(layout == BlockLayout::Custom)
	{
		const int n2 = N2();
		if(static_cast<int>(custom_permutation.size()) != n2) { throw ArgumentError("custom permutation must have N2 entries"); }
		std::vector<int> sorted = custom_permutation;
		std::ranges::sort(sorted);
		for(int k = 0; k < n2; ++k)
		{
			if(sorted[static_cast<std::size_t>(k)] != k) { throw ArgumentError("custom permutation is not a bijection on 0..N2-1"); }
		}
	}
}

void GateSequence::push(Gate g)
{
	g.validate(num_qubits);
	tags.push_back(g.is_two_qubit() ? NoiseTag::TwoQubit : NoiseTag::OneQubit);
	gates.push_back(std::move(g));
}

void GateSequence::append(const GateSequence& other)
{
	gates.insert(gates.end(), other.gates.begin(), other.gates.end());
	tags.insert(tags.end(), other.tags.begin(), other.tags.end());
}

namespace
{

std::vector<std::pair<int, int>> bonds_even_then_odd(int n)
{
	std::vector<std::pair<int, int>> bonds;
	for(int j = 0; j + 1 < n; j += 2) { bonds.emplace_back(j, j + 1); }
	for(int j = 1; j + 1 < n; j += 2) { bonds.emplace_back(j, j + 1); }
	return bonds;
}

// exp(-i phi/2 Z_a Z_b)
void push_zz(GateSequence& seq, int a, int b, double phi)
{
	seq.push(Gate::cnot(a, b));
	seq.push(Gate::rz(b, phi));
	seq.push(Gate::cnot(a, b));
}

// Shared skeleton; field_angle and bond_angle fill every rotation slot.
GateSequence step_skeleton(const SpinModel& model, double field_angle, double bond_angle)
{
	model.validate();
	GateSequence seq;
	seq.num_qubits = model.num_spins;
	const int n = model.num_spins;
	const auto bonds = bonds_even_then_odd(n);

	if(model.kind == ModelKind::TFIM)
	{
		for(int q = 0; q < n; ++q) { seq.push(Gate::rx(q, field_angle)); }
		for(const auto& [a, b] : bonds) { push_zz(seq, a, b, bond_angle); }
		return seq;
	}

	for(int q = 0; q < n; ++q) { seq.push(Gate::rz(q, field_angle)); }
	for(const auto& [a, b] : bonds)
	{
		// XX: H-conjugated ZZ
		seq.push(Gate::h(a));
		seq.push(Gate::h(b));
		push_zz(seq, a, b, bond_angle);
		seq.push(Gate::h(a));
		seq.push(Gate::h(b));
		// YY: W = H S^dag maps Y to Z, so apply S^dag, H ... H, S
		seq.push(Gate::sdg(a));
		seq.push(Gate::sdg(b));
		seq.push(Gate::h(a));
		seq.push(Gate::h(b));
		push_zz(seq, a, b, bond_angle);
		seq.push(Gate::h(a));
		seq.push(Gate::h(b));
		seq.push(Gate::s(a));
		seq.push(Gate::s(b));
	}
	return seq;
}

} // namespace

GateSequence trotter_step(const SpinModel& model, double dt)
{
	if(dt < 0.0) { throw ArgumentError("dt must be nonnegative"); }
	return step_skeleton(model, 2.0 * model.h * dt, 2.0 * model.J * dt);
}

GateSequence empty_step(const SpinModel& model, double epsilon_angle)
{
	if(std::abs(epsilon_angle) > 1e-2) { throw ArgumentError("empty-step angle magnitude exceeds 1e-2"); }
	return step_skeleton(model, epsilon_angle, epsilon_angle);
}

std::vector<BlockKind> block_layout(const TrotterSchedule& schedule, Stage stage)
{
	schedule.validate();
	const int n1 = schedule.N1, n2 = schedule.N2();
	switch(stage)
	{
	case Stage::QuasiIdeal: return std::vector<BlockKind>(static_cast<std::size_t>(n1), BlockKind::Real);
	case Stage::EvalNoisy: return std::vector<BlockKind>(static_cast<std::size_t>(n2), BlockKind::Real);
	case Stage::TrainingNoisy: break;
	}

	std::vector<BlockKind> blocks;
	blocks.reserve(static_cast<std::size_t>(n2));
	switch(schedule.layout)
	{
	case BlockLayout::Interleaved:
		for(int r = 0; r < n1; ++r)
		{
			blocks.push_back(BlockKind::Real);
			for(int e = 1; e < schedule.c; ++e) { blocks.push_back(BlockKind::Empty); }
		}
		break;
	case BlockLayout::Appended:
		blocks.assign(static_cast<std::size_t>(n1), BlockKind::Real);
		blocks.resize(static_cast<std::size_t>(n2), BlockKind::Empty);
		break;
	case BlockLayout::Custom:
		for(const int slot : schedule.custom_permutation) { blocks.push_back(slot < n1 ? BlockKind::Real : BlockKind::Empty); }
		break;
	}
	return blocks;
}

GateSequence build_circuit(const SpinModel& model, const TrotterSchedule& schedule, double t, Stage stage)
{
	if(!(t > 0.0) || t > schedule.T * (1.0 + 1e-12)) { throw ArgumentError("time point outside (0, T]"); }
	const auto blocks = block_layout(schedule, stage);
	const int real_blocks = static_cast<int>(std::ranges::count(blocks, BlockKind::Real));
	const double dt = t / static_cast<double>(real_blocks);

	const GateSequence real = trotter_step(model, dt);
	const GateSequence empty = empty_step(model, schedule.epsilon_angle);

	GateSequence seq;
	seq.num_qubits = model.num_spins;
	seq.blocks = blocks;
	for(const auto b : blocks) { seq.append(b == BlockKind::Real ? real : empty); }
	return seq;
}

void run_sequence(DensityMatrix& rho, const GateSequence& seq, const NoiseModel& noise)
{
	if(rho.num_qubits() != seq.num_qubits) { throw ArgumentError("sequence and state qubit counts differ"); }
	for(std::size_t k = 0; k < seq.gates.size(); ++k)
	{
		const Gate& g = seq.gates[k];
		rho.apply(g);
		if(noise.enabled)
		{
			const double p = seq.tags[k] == NoiseTag::TwoQubit ? noise.p2 : noise.p1;
			if(p > 0.0) { rho.depolarize(g.targets, p); }
		}
	}
}

DensityMatrix simulate(const GateSequence& seq, std::string_view init_bits, const NoiseModel& noise)
{
	DensityMatrix rho = basis_state(seq.num_qubits, init_bits);
	run_sequence(rho, seq, noise);
	return rho;
}

Eigen::MatrixXcd sequence_unitary(const GateSequence& seq)
{
	const Eigen::Index d = Eigen::Index{1} << seq.num_qubits;
	Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
	for(const auto& g : seq.gates)
	{
		if(g.kind == GateKind::CNOT)
		{
			const auto cm = static_cast<Eigen::Index>(qubit_mask(seq.num_qubits, g.targets[0]));
			const auto tm = static_cast<Eigen::Index>(qubit_mask(seq.num_qubits, g.targets[1]));
			for(Eigen::Index r = 0; r < d; ++r)
			{
				if((r & cm) && !(r & tm)) { u.row(r).swap(u.row(r | tm)); }
			}
			continue;
		}
		const Eigen::Matrix2cd g2 = single_qubit_unitary(g);
		const auto m = static_cast<Eigen::Index>(qubit_mask(seq.num_qubits, g.targets[0]));
		for(Eigen::Index r0 = 0; r0 < d; ++r0)
		{
			if(r0 & m) { continue; }
			const Eigen::RowVectorXcd a = u.row(r0), b = u.row(r0 | m);
			u.row(r0) = g2(0, 0) * a + g2(0, 1) * b;
			u.row(r0 | m) = g2(1, 0) * a + g2(1, 1) * b;
		}
	}
	return u;
}

std::string to_jsonl(const GateSequence& seq)
{
	std::string out;
	for(const auto& g : seq.gates)
	{
		nlohmann::json j;
		j["kind"] = gate_kind_name(g.kind);
		j["targets"] = g.targets;
		if(g.is_rotation()) { j["angle"] = g.angle; }
		out += j.dump();
		out += '\n';
	}
	return out;
}

GateSequence from_jsonl(std::string_view text, int num_qubits)
{
	GateSequence seq;
	seq.num_qubits = num_qubits;
	std::istringstream in{std::string(text)};
	std::string line;
	std::size_t lineno = 0;
	while(std::getline(in, line))
	{
		++lineno;
		if(line.empty()) { continue; }
		try
		{
			const auto j = nlohmann::json::parse(line);
			Gate g{gate_kind_from_name(j.at("kind").get<std::string>()), j.at("targets").get<std::vector<int>>(), j.value("angle", 0.0)};
			seq.push(std::move(g));
		}
		catch(const std::exception& e)
		{
			throw ParseError("<circuit>", lineno, e.what());
		}
	}
	return seq;
}

} // namespace qmit
