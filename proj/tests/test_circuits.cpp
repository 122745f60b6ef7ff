#include "qmit/circuits.hpp"
#include "qmit/errors.hpp"
#include "qmit/reference.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <numbers>

using namespace qmit;
using Catch::Matchers::WithinAbs;
using qtest::max_abs;
using qtest::one_site;
using qtest::pauli_rotation;
using qtest::two_site;

namespace
{

std::vector<std::pair<int, int>> even_then_odd(int n)
{
	std::vector<std::pair<int, int>> b;
	for(int j = 0; j + 1 < n; j += 2) { b.emplace_back(j, j + 1); }
	for(int j = 1; j + 1 < n; j += 2) { b.emplace_back(j, j + 1); }
	return b;
}

// Closed-form product of Pauli rotations in the gate order of one step. The
// circuit angles realize the split propagator of -H (see trotter_step).
Eigen::MatrixXcd oracle_step(const SpinModel& m, double dt)
{
	const int n = m.num_spins;
	const Eigen::Index d = Eigen::Index{1} << n;
	Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
	const char field = m.kind == ModelKind::TFIM ? 'X' : 'Z';
	for(int q = 0; q < n; ++q) { u = pauli_rotation(one_site(n, q, field), m.h * dt) * u; }
	for(const auto& [a, b] : even_then_odd(n))
	{
		if(m.kind == ModelKind::TFIM) { u = pauli_rotation(two_site(n, a, b, 'Z'), m.J * dt) * u; }
		else
		{
			u = pauli_rotation(two_site(n, a, b, 'X'), m.J * dt) * u;
			u = pauli_rotation(two_site(n, a, b, 'Y'), m.J * dt) * u;
		}
	}
	return u;
}

Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd& h, double t)
{
	const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
	Eigen::VectorXcd phase(es.eigenvalues().size());
	for(Eigen::Index k = 0; k < phase.size(); ++k) { phase(k) = std::exp(cx{0.0, -es.eigenvalues()(k) * t}); }
	return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace

TEST_CASE("trotter step angles", "[circuits]")
{
	const SpinModel tfim{ModelKind::TFIM, 5, 2.0, 1.0};
	const auto step = trotter_step(tfim, 0.25);
	int rx = 0, rz = 0, cnot = 0;
	for(const auto& g : step.gates)
	{
		if(g.kind == GateKind::RX)
		{
			CHECK(g.angle == 0.5);
			++rx;
		}
		if(g.kind == GateKind::RZ)
		{
			CHECK(g.angle == 1.0);
			++rz;
		}
		if(g.kind == GateKind::CNOT) { ++cnot; }
	}
	CHECK(rx == 5);
	CHECK(rz == 4);
	CHECK(cnot == 8);
	CHECK(step.size() == 17);
	CHECK(trotter_step(SpinModel{ModelKind::XY, 5, 2.0, 1.0}, 0.1).size() == 5 + 4 * 18);

	for(std::size_t k = 0; k < step.gates.size(); ++k)
	{
		CHECK(step.tags[k] == (step.gates[k].is_two_qubit() ? NoiseTag::TwoQubit : NoiseTag::OneQubit));
	}
}

TEST_CASE("zero-length step is the identity", "[circuits]")
{
	for(const auto kind : {ModelKind::TFIM, ModelKind::XY})
	{
		const SpinModel m{kind, 5, 2.0, 1.0};
		const auto u = sequence_unitary(trotter_step(m, 0.0));
		CHECK(max_abs(u - Eigen::MatrixXcd::Identity(32, 32)) < 1e-12);
		const auto e = sequence_unitary(empty_step(m, 0.0));
		CHECK(max_abs(e - Eigen::MatrixXcd::Identity(32, 32)) < 1e-12);
	}
}

TEST_CASE("trotter step matches the dense split propagator", "[circuits][oracle]")
{
	for(const auto kind : {ModelKind::TFIM, ModelKind::XY})
	{
		for(const int n : {2, 3, 5})
		{
			for(const double dt : {0.05, 0.25, 0.7})
			{
				const SpinModel m{kind, n, 2.0, 1.0};
				CHECK(max_abs(sequence_unitary(trotter_step(m, dt)) - oracle_step(m, dt)) < 1e-12);
			}
		}
	}

	// two-spin TFIM against matrix exponentials of the split Hamiltonian:
	// H_A = -h (X1 + X2), H_B = -J Z1 Z2, field part first in time
	const SpinModel m{ModelKind::TFIM, 2, 2.0, 1.0};
	const double dt = 0.3;
	const Eigen::MatrixXcd ha = -m.h * (qtest::pauli_string("XI") + qtest::pauli_string("IX"));
	const Eigen::MatrixXcd hb = -m.J * qtest::pauli_string("ZZ");
	const Eigen::MatrixXcd expect = expm_hermitian(-hb, dt) * expm_hermitian(-ha, dt);
	CHECK(max_abs(sequence_unitary(trotter_step(m, dt)) - expect) < 1e-10);
	// and H_A + H_B is the model Hamiltonian
	CHECK(max_abs(hamiltonian(m) - (ha + hb)) < 1e-15);
}

TEST_CASE("empty step", "[circuits]")
{
	for(const auto kind : {ModelKind::TFIM, ModelKind::XY})
	{
		const SpinModel m{kind, 5, 2.0, 1.0};
		const auto real = trotter_step(m, 0.2);
		const auto empty = empty_step(m, 0.0);
		REQUIRE(empty.size() == real.size());
		for(std::size_t k = 0; k < real.size(); ++k)
		{
			CHECK(empty.gates[k].kind == real.gates[k].kind);
			CHECK(empty.gates[k].targets == real.gates[k].targets);
		}
		CHECK_THROWS_AS(empty_step(m, 0.02), ArgumentError);
		CHECK_NOTHROW(empty_step(m, 0.01));
	}

	// noise makes the identity circuit contract purity
	Rng rng(31);
	const SpinModel m{ModelKind::TFIM, 5, 2.0, 1.0};
	const NoiseModel noise = NoiseModel::default_profile(5);
	for(int trial = 0; trial < 5; ++trial)
	{
		auto rho = qtest::random_pure(5, rng);
		REQUIRE_THAT(rho.purity(), WithinAbs(1.0, 1e-12));
		run_sequence(rho, empty_step(m, 0.0), noise);
		CHECK(rho.purity() < 1.0 - 1e-6);
	}
}

TEST_CASE("block layouts", "[circuits]")
{
	using enum BlockKind;
	TrotterSchedule s;
	s.N1 = 2;
	s.c = 2;
	CHECK(block_layout(s, Stage::TrainingNoisy) == std::vector<BlockKind>{Real, Empty, Real, Empty});
	CHECK(block_layout(s, Stage::QuasiIdeal) == std::vector<BlockKind>{Real, Real});
	CHECK(block_layout(s, Stage::EvalNoisy) == std::vector<BlockKind>{Real, Real, Real, Real});
	s.c = 3;
	CHECK(block_layout(s, Stage::TrainingNoisy) == std::vector<BlockKind>{Real, Empty, Empty, Real, Empty, Empty});
	s.layout = BlockLayout::Appended;
	CHECK(block_layout(s, Stage::TrainingNoisy) == std::vector<BlockKind>{Real, Real, Empty, Empty, Empty, Empty});
	s.layout = BlockLayout::Custom;
	s.custom_permutation = {3, 0, 4, 5, 1, 2};
	CHECK(block_layout(s, Stage::TrainingNoisy) == std::vector<BlockKind>{Empty, Real, Empty, Empty, Real, Empty});
	s.custom_permutation = {0, 0, 1, 2, 3, 4};
	CHECK_THROWS_AS(block_layout(s, Stage::TrainingNoisy), ArgumentError);
	s.custom_permutation = {0, 1};
	CHECK_THROWS_AS(block_layout(s, Stage::TrainingNoisy), ArgumentError);

	for(const int n1 : {1, 2, 3})
	{
		for(const int c : {1, 2, 4})
		{
			TrotterSchedule t;
			t.N1 = n1;
			t.c = c;
			for(const auto layout : {BlockLayout::Interleaved, BlockLayout::Appended})
			{
				t.layout = layout;
				const auto b = block_layout(t, Stage::TrainingNoisy);
				CHECK(static_cast<int>(b.size()) == n1 * c);
				CHECK(std::ranges::count(b, Real) == n1);
			}
		}
	}
}

TEST_CASE("eval stage splits t into N2 real blocks", "[circuits]")
{
	const SpinModel m{ModelKind::TFIM, 5, 2.0, 1.0};
	TrotterSchedule s;
	s.N1 = 2;
	s.c = 3;
	const double t = 0.9;
	const auto seq = build_circuit(m, s, t, Stage::EvalNoisy);
	CHECK(seq.blocks.size() == 6);
	CHECK(seq.size() == 6 * trotter_step(m, 0.1).size());
	for(const auto& g : seq.gates)
	{
		if(g.kind == GateKind::RX) { CHECK_THAT(g.angle, WithinAbs(2.0 * m.h * t / 6.0, 1e-15)); }
		if(g.kind == GateKind::RZ) { CHECK_THAT(g.angle, WithinAbs(2.0 * m.J * t / 6.0, 1e-15)); }
	}
	CHECK_THROWS_AS(build_circuit(m, s, 0.0, Stage::EvalNoisy), ArgumentError);
	CHECK_THROWS_AS(build_circuit(m, s, 1.5, Stage::EvalNoisy), ArgumentError);
}

TEST_CASE("noise off: quasi-ideal and training circuits agree", "[circuits]")
{
	for(const auto kind : {ModelKind::TFIM, ModelKind::XY})
	{
		const SpinModel m{kind, 5, 2.0, 1.0};
		for(const auto layout : {BlockLayout::Interleaved, BlockLayout::Appended})
		{
			TrotterSchedule s;
			s.layout = layout;
			s.c = 3;
			for(const std::string init : {"00000", "11100", "01011"})
			{
				for(const double t : {0.35, 1.0})
				{
					const auto a = simulate(build_circuit(m, s, t, Stage::QuasiIdeal), init, NoiseModel::none());
					const auto b = simulate(build_circuit(m, s, t, Stage::TrainingNoisy), init, NoiseModel::none());
					for(int j = 0; j < 5; ++j)
					{
						CHECK_THAT(expectation_pauli(a, Axis::Z, j), WithinAbs(expectation_pauli(b, Axis::Z, j), 1e-12));
					}
				}
			}
		}
	}
}

TEST_CASE("noisy runs tag every gate", "[circuits]")
{
	// p2 = 15/16 is the fully depolarizing point on two qubits
	GateSequence seq;
	seq.num_qubits = 2;
	seq.push(Gate::cnot(0, 1));
	NoiseModel noise = NoiseModel::uniform(2, 0.0, 15.0 / 16.0, 0.0, 0.0);
	auto rho = basis_state(2, "10");
	run_sequence(rho, seq, noise);
	CHECK(max_abs(rho.entries() - 0.25 * Eigen::MatrixXcd::Identity(4, 4)) < 1e-14);

	GateSequence single;
	single.num_qubits = 2;
	single.push(Gate::h(1));
	noise = NoiseModel::uniform(2, 0.75, 0.0, 0.0, 0.0);
	rho = basis_state(2, "00");
	run_sequence(rho, single, noise);
	// qubit 1 fully mixed, qubit 0 untouched
	CHECK_THAT(expectation_pauli(rho, Axis::Z, 0), WithinAbs(1.0, 1e-15));
	CHECK_THAT(rho.purity(), WithinAbs(0.5, 1e-14));

	noise.enabled = false;
	rho = basis_state(2, "00");
	run_sequence(rho, single, noise);
	CHECK_THAT(rho.purity(), WithinAbs(1.0, 1e-14));
}

TEST_CASE("gate sequence JSON lines round trip", "[circuits]")
{
	const SpinModel m{ModelKind::XY, 4, 2.0, 1.0};
	const auto seq = trotter_step(m, 0.123456789);
	const auto back = from_jsonl(to_jsonl(seq), 4);
	CHECK(back.gates == seq.gates);
	CHECK(back.tags == seq.tags);
	CHECK_THROWS(from_jsonl("{\"kind\":\"cnot\",\"targets\":[0,0],\"angle\":0}\n", 4));
}

TEST_CASE("schedule validation", "[circuits]")
{
	TrotterSchedule s;
	CHECK_NOTHROW(s.validate());
	CHECK(s.N2() == 4);
	const auto grid = s.time_grid();
	REQUIRE(grid.size() == 20);
	CHECK(grid.front() == 0.05);
	CHECK(grid.back() == 1.0);
	s.epsilon_angle = 0.05;
	CHECK_THROWS_AS(s.validate(), ArgumentError);
	s.epsilon_angle = 0.0;
	s.T = 0.0;
	CHECK_THROWS_AS(s.validate(), ArgumentError);
	CHECK_THROWS_AS((SpinModel{ModelKind::TFIM, 7, 2.0, 1.0}.validate()), CapabilityError);
}
