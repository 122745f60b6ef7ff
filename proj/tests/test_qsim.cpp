#include "qmit/errors.hpp"
#include "qmit/qsim.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace qmit;
using Catch::Matchers::WithinAbs;
using qtest::embed;
using qtest::max_abs;
using qtest::pauli;

namespace
{

constexpr double pi = std::numbers::pi;

Eigen::MatrixXcd dense_gate(int n, const Gate& g)
{
	if(g.kind == GateKind::CNOT)
	{
		Eigen::Matrix2cd p0 = Eigen::Matrix2cd::Zero(), p1 = Eigen::Matrix2cd::Zero();
		p0(0, 0) = 1.0;
		p1(1, 1) = 1.0;
		return embed(n, {{g.targets[0], p0}}) + embed(n, {{g.targets[0], p1}, {g.targets[1], pauli('X')}});
	}
	return embed(n, {{g.targets[0], single_qubit_unitary(g)}});
}

// Kraus sum with uniform non-identity Paulis, total weight p.
Eigen::MatrixXcd kraus_depolarize(const Eigen::MatrixXcd& rho, int n, const std::vector<int>& qubits, double p)
{
	const char labels[] = {'I', 'X', 'Y', 'Z'};
	const int k = static_cast<int>(qubits.size());
	const int terms = 1 << (2 * k);
	Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
	for(int code = 0; code < terms; ++code)
	{
		std::vector<std::pair<int, Eigen::Matrix2cd>> f;
		for(int i = 0; i < k; ++i) { f.emplace_back(qubits[static_cast<std::size_t>(i)], pauli(labels[(code >> (2 * i)) & 3])); }
		const Eigen::MatrixXcd op = embed(n, f);
		const double w = code == 0 ? 1.0 - p : p / static_cast<double>(terms - 1);
		out += w * op * rho * op.adjoint();
	}
	return out;
}

} // namespace

TEST_CASE("basis states", "[qsim]")
{
	const auto rho = basis_state(1, "0");
	Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(2, 2);
	expect(0, 0) = 1.0;
	CHECK(rho.entries() == expect);

	const auto all_up = basis_state(5, "00000");
	for(int j = 0; j < 5; ++j) { CHECK(expectation_pauli(all_up, Axis::Z, j) == 1.0); }

	const auto wall = basis_state(5, "11100");
	double excitations = 0.0;
	for(int j = 0; j < 5; ++j) { excitations += 0.5 * (1.0 - expectation_pauli(wall, Axis::Z, j)); }
	CHECK(excitations == 3.0);
	// qubit 0 is the leftmost character
	CHECK(expectation_pauli(basis_state(3, "100"), Axis::Z, 0) == -1.0);
	CHECK(expectation_pauli(basis_state(3, "100"), Axis::Z, 2) == 1.0);

	CHECK_THROWS_AS(basis_state(3, "10"), ArgumentError);
	CHECK_THROWS_AS(basis_state(2, "1a"), ArgumentError);
	CHECK_THROWS_AS(basis_state(7, "0000000"), CapabilityError);
}

TEST_CASE("gate examples", "[qsim]")
{
	auto rho = apply_gate(basis_state(1, "0"), Gate::rx(0, pi));
	CHECK_THAT(expectation_pauli(rho, Axis::Z, 0), WithinAbs(-1.0, 1e-15));

	for(const double theta : {0.1, 1.0, 2.5, -4.0})
	{
		CHECK_THAT(expectation_pauli(apply_gate(basis_state(1, "0"), Gate::rz(0, theta)), Axis::Z, 0), WithinAbs(1.0, 1e-15));
		CHECK_THAT(expectation_pauli(apply_gate(basis_state(1, "0"), Gate::rx(0, theta)), Axis::Z, 0), WithinAbs(std::cos(theta), 1e-14));
	}

	const auto out = apply_gate(basis_state(2, "10"), Gate::cnot(0, 1));
	CHECK(std::abs(out.entries()(3, 3) - 1.0) < 1e-15);
	CHECK(out.entries().cwiseAbs().sum() == 1.0);

	CHECK_THROWS_AS(apply_gate(basis_state(2, "00"), Gate::cnot(1, 1)), ArgumentError);
	CHECK_THROWS_AS(apply_gate(basis_state(2, "00"), Gate::rx(2, 0.1)), ArgumentError);
}

TEST_CASE("single-qubit unitaries", "[qsim]")
{
	const Eigen::Matrix2cd I = Eigen::Matrix2cd::Identity();
	for(const auto& g : {Gate::rx(0, 0.7), Gate::rz(0, -1.3), Gate::x(0), Gate::h(0), Gate::s(0), Gate::sdg(0)})
	{
		const Eigen::Matrix2cd u = single_qubit_unitary(g);
		CHECK(max_abs(u * u.adjoint() - I) < 1e-15);
	}
	CHECK(max_abs(single_qubit_unitary(Gate::rx(0, pi)) - cx{0, -1} * pauli('X')) < 1e-15);
	CHECK(max_abs(single_qubit_unitary(Gate::s(0)) * single_qubit_unitary(Gate::sdg(0)) - I) < 1e-15);
	const Eigen::Matrix2cd h = single_qubit_unitary(Gate::h(0));
	CHECK(max_abs(h * pauli('Z') * h - pauli('X')) < 1e-15);
	// H S^dag maps Y onto Z
	const Eigen::Matrix2cd w = h * single_qubit_unitary(Gate::sdg(0));
	CHECK(max_abs(w * pauli('Y') * w.adjoint() - pauli('Z')) < 1e-15);
}

TEST_CASE("gate kernels match dense conjugation", "[qsim][oracle]")
{
	Rng rng(7);
	for(const int n : {1, 2, 3, 5})
	{
		const auto rho = qtest::random_density(n, rng);
		std::vector<Gate> gates;
		for(int q = 0; q < n; ++q)
		{
			gates.push_back(Gate::rx(q, rng.uniform(-pi, pi)));
			gates.push_back(Gate::rz(q, rng.uniform(-pi, pi)));
			gates.push_back(Gate::x(q));
			gates.push_back(Gate::h(q));
			gates.push_back(Gate::s(q));
			gates.push_back(Gate::sdg(q));
			for(int r = 0; r < n; ++r)
			{
				if(r != q) { gates.push_back(Gate::cnot(q, r)); }
			}
		}
		for(const auto& g : gates)
		{
			const Eigen::MatrixXcd u = dense_gate(n, g);
			const Eigen::MatrixXcd expect = u * rho.entries() * u.adjoint();
			CHECK(max_abs(apply_gate(rho, g).entries() - expect) < 1e-13);
		}
	}
}

TEST_CASE("depolarizing channel examples", "[qsim]")
{
	Rng rng(11);
	const auto rho = qtest::random_density(3, rng);
	CHECK(apply_depolarizing(rho, {1}, 0.0).entries() == rho.entries());
	CHECK(apply_depolarizing(rho, {0, 2}, 0.0).entries() == rho.entries());

	for(const double p : {0.01, 0.2, 0.5})
	{
		const auto one = qtest::random_density(1, rng);
		const double z = expectation_pauli(one, Axis::Z, 0);
		CHECK_THAT(expectation_pauli(apply_depolarizing(one, {0}, p), Axis::Z, 0), WithinAbs((1.0 - 4.0 * p / 3.0) * z, 1e-14));
	}

	for(int trial = 0; trial < 5; ++trial)
	{
		const auto out = apply_depolarizing(qtest::random_density(1, rng), {0}, 0.75);
		CHECK(max_abs(out.entries() - 0.5 * Eigen::MatrixXcd::Identity(2, 2)) < 1e-15);
	}

	CHECK_THROWS_AS(apply_depolarizing(rho, {0}, -0.1), ArgumentError);
	CHECK_THROWS_AS(apply_depolarizing(rho, {0}, 1.1), ArgumentError);
	CHECK_THROWS_AS(apply_depolarizing(rho, {3}, 0.1), ArgumentError);
}

TEST_CASE("depolarizing equals the Pauli Kraus sum", "[qsim][oracle]")
{
	Rng rng(3);
	for(const int n : {1, 2, 3, 4})
	{
		const auto rho = qtest::random_density(n, rng);
		for(const double p : {0.0, 1e-3, 0.05, 0.3, 0.75})
		{
			for(int q = 0; q < n; ++q)
			{
				CHECK(max_abs(apply_depolarizing(rho, {q}, p).entries() - kraus_depolarize(rho.entries(), n, {q}, p)) < 1e-13);
			}
			for(int a = 0; a < n; ++a)
			{
				for(int b = 0; b < n; ++b)
				{
					if(a == b) { continue; }
					CHECK(max_abs(apply_depolarizing(rho, {a, b}, p).entries() - kraus_depolarize(rho.entries(), n, {a, b}, p)) < 1e-13);
				}
			}
		}
	}
}

TEST_CASE("depolarizing channels compose", "[qsim][property]")
{
	Rng rng(5);
	for(int trial = 0; trial < 10; ++trial)
	{
		const auto rho = qtest::random_density(2, rng);
		const double p = rng.uniform(0.0, 0.5), q = rng.uniform(0.0, 0.5);
		// contraction factors multiply: lambda = 4p/3 for one qubit
		const double lp = 4.0 * p / 3.0, lq = 4.0 * q / 3.0;
		const double pc = 0.75 * (lp + lq - lp * lq);
		const auto twice = apply_depolarizing(apply_depolarizing(rho, {1}, p), {1}, q);
		CHECK(max_abs(twice.entries() - apply_depolarizing(rho, {1}, pc).entries()) < 1e-14);
		// channels on disjoint qubits commute
		const auto ab = apply_depolarizing(apply_depolarizing(rho, {0}, p), {1}, q);
		const auto ba = apply_depolarizing(apply_depolarizing(rho, {1}, q), {0}, p);
		CHECK(max_abs(ab.entries() - ba.entries()) < 1e-15);
	}
}

TEST_CASE("noisy evolution keeps a valid density matrix", "[qsim][property]")
{
	Rng rng(13);
	for(int trial = 0; trial < 20; ++trial)
	{
		const int n = 1 + static_cast<int>(rng.below(5));
		auto rho = qtest::random_pure(n, rng);
		for(int step = 0; step < 40; ++step)
		{
			const int q = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
			switch(rng.below(4))
			{
			case 0: rho = apply_gate(rho, Gate::rx(q, rng.uniform(-pi, pi))); break;
			case 1: rho = apply_gate(rho, Gate::h(q)); break;
			case 2:
				if(n > 1)
				{
					const int r = (q + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)))) % n;
					rho = apply_gate(rho, Gate::cnot(q, r));
					rho = apply_depolarizing(rho, {q, r}, rng.uniform(0.0, 0.1));
				}
				break;
			default: rho = apply_depolarizing(rho, {q}, rng.uniform(0.0, 0.1)); break;
			}
		}
		CHECK_THAT(rho.trace(), WithinAbs(1.0, 1e-12));
		CHECK(rho.hermiticity_defect() < 1e-12);
		CHECK(rho.min_eigenvalue() > -1e-12);
		CHECK(rho.purity() <= 1.0 + 1e-12);
	}
}

TEST_CASE("expectation values", "[qsim]")
{
	CHECK(expectation_pauli(basis_state(1, "0"), Axis::Z, 0) == 1.0);
	CHECK(expectation_pauli(basis_state(1, "0"), Axis::X, 0) == 0.0);
	CHECK(expectation_pauli(basis_state(1, "0"), Axis::Y, 0) == 0.0);
	const auto plus = apply_gate(basis_state(1, "0"), Gate::h(0));
	CHECK_THAT(expectation_pauli(plus, Axis::X, 0), WithinAbs(1.0, 1e-15));
	const auto minus_y = apply_gate(basis_state(1, "0"), Gate::rx(0, pi / 2));
	CHECK_THAT(expectation_pauli(minus_y, Axis::Y, 0), WithinAbs(-1.0, 1e-15));

	Rng rng(17);
	const auto rho = qtest::random_density(3, rng);
	for(const char a : {'X', 'Y', 'Z'})
	{
		for(int q = 0; q < 3; ++q)
		{
			const double dense = (qtest::pauli_string(qtest::one_site(3, q, a)) * rho.entries()).trace().real();
			CHECK_THAT(expectation_pauli(rho, axis_from_char(static_cast<char>(std::tolower(a))), q), WithinAbs(dense, 1e-14));
		}
	}
}

TEST_CASE("shot sampling", "[qsim]")
{
	const auto all_up = basis_state(5, "00000");
	const auto h = sample_counts(all_up, 8192, NoiseModel::none(), 1);
	CHECK(h.shots == 8192);
	REQUIRE(h.counts.size() == 1);
	CHECK(h.counts.at("00000") == 8192);

	SECTION("readout flips at rate e01")
	{
		const auto noise = NoiseModel::uniform(1, 0.0, 0.0, 0.02, 0.0);
		const std::uint64_t shots = 400000;
		const auto hist = sample_counts(basis_state(1, "0"), shots, noise, 99);
		const double frac = static_cast<double>(hist.counts.at("1")) / static_cast<double>(shots);
		CHECK_THAT(frac, WithinAbs(0.02, 5.0 * std::sqrt(0.02 * 0.98 / static_cast<double>(shots))));
	}

	SECTION("balanced superposition within the binomial bound")
	{
		const auto plus = apply_gate(basis_state(1, "0"), Gate::h(0));
		const auto hist = sample_counts(plus, 8192, NoiseModel::none(), 2024);
		const double p0 = static_cast<double>(hist.counts.at("0")) / 8192.0;
		CHECK(std::abs(p0 - 0.5) < 3.0 * std::sqrt(0.25 / 8192.0));
	}

	SECTION("Y through the pre-rotation")
	{
		auto rho = apply_gate(basis_state(1, "0"), Gate::rx(0, pi / 2));
		for(const auto& g : measurement_prerotation(Axis::Y, 0)) { rho = apply_gate(rho, g); }
		const auto hist = sample_counts(rho, 8192, NoiseModel::none(), 5);
		CHECK_THAT(expectation_from_counts(hist, Axis::Y, 0, true), WithinAbs(-1.0, 4.0 / std::sqrt(8192.0)));
	}

	SECTION("seeded and reproducible")
	{
		Rng rng(1);
		const auto rho = qtest::random_density(3, rng);
		const auto noise = NoiseModel::default_profile(3);
		CHECK(sample_counts(rho, 1000, noise, 42) == sample_counts(rho, 1000, noise, 42));
		CHECK_FALSE(sample_counts(rho, 1000, noise, 42) == sample_counts(rho, 1000, noise, 43));
	}

	SECTION("errors")
	{
		CHECK_THROWS_AS(sample_counts(all_up, 0, NoiseModel::none(), 1), ArgumentError);
		Eigen::MatrixXcd bad = all_up.entries();
		bad(0, 0) = 0.9;
		CHECK_THROWS_AS(sample_counts(DensityMatrix(5, bad), 10, NoiseModel::none(), 1), StateError);
	}
}

TEST_CASE("expectation from counts", "[qsim]")
{
	ShotHistogram h{1, {{"0", 8192}}, 8192};
	CHECK(expectation_from_counts(h, Axis::Z, 0, false) == 1.0);
	ShotHistogram even{1, {{"0", 4096}, {"1", 4096}}, 8192};
	CHECK(expectation_from_counts(even, Axis::Z, 0, false) == 0.0);
	ShotHistogram two{2, {{"01", 3}, {"11", 1}}, 4};
	CHECK(expectation_from_counts(two, Axis::Z, 0, false) == 0.5);
	CHECK(expectation_from_counts(two, Axis::Z, 1, false) == -1.0);
	CHECK_THROWS_AS(expectation_from_counts(h, Axis::X, 0, false), ContractError);
	CHECK_NOTHROW(expectation_from_counts(h, Axis::X, 0, true));
}

TEST_CASE("readout distribution is the confusion-matrix product", "[qsim][oracle]")
{
	Rng rng(23);
	const int n = 3;
	const auto rho = qtest::random_density(n, rng);
	NoiseModel noise = NoiseModel::uniform(n, 0.0, 0.0, 0.0, 0.0);
	noise.readout = {{0.01, 0.05}, {0.1, 0.02}, {0.03, 0.07}};
	noise.enabled = true;

	Eigen::MatrixXd c = Eigen::MatrixXd::Ones(1, 1);
	for(const auto& r : noise.readout)
	{
		Eigen::Matrix2d m; // m(read, true)
		m << 1.0 - r.e01, r.e10, r.e01, 1.0 - r.e10;
		Eigen::MatrixXd next(c.rows() * 2, c.cols() * 2);
		for(Eigen::Index i = 0; i < c.rows(); ++i)
		{
			for(Eigen::Index j = 0; j < c.cols(); ++j) { next.block(i * 2, j * 2, 2, 2) = c(i, j) * m; }
		}
		c = next;
	}
	const Eigen::VectorXd p_true = rho.entries().diagonal().real();
	const Eigen::VectorXd expect = c * p_true;
	const auto got = readout_distribution(rho, noise);
	for(Eigen::Index k = 0; k < expect.size(); ++k) { CHECK_THAT(got[static_cast<std::size_t>(k)], WithinAbs(expect(k), 1e-15)); }

	// sampled frequencies approach it
	const auto hist = sample_counts(rho, 200000, noise, 77);
	for(Eigen::Index k = 0; k < expect.size(); ++k)
	{
		const auto it = hist.counts.find(index_to_bits(static_cast<std::uint64_t>(k), n));
		const double f = it == hist.counts.end() ? 0.0 : static_cast<double>(it->second) / 200000.0;
		CHECK(std::abs(f - expect(k)) < 5.0 * std::sqrt(expect(k) * (1.0 - expect(k)) / 200000.0) + 1e-9);
	}

	// parity of the readout distribution on |0>: 1 - 2 e01
	const auto p0 = readout_distribution(basis_state(n, "000"), noise);
	CHECK_THAT(parity_expectation(p0, n, 1), WithinAbs(1.0 - 2.0 * 0.1, 1e-15));
}

TEST_CASE("bit helpers", "[qsim]")
{
	CHECK(index_to_bits(6, 3) == "110");
	CHECK(bits_to_index("110") == 6);
	CHECK(popcount_bits("10110") == 3);
	CHECK(qubit_mask(5, 0) == 16);
	for(std::uint64_t k = 0; k < 32; ++k) { CHECK(bits_to_index(index_to_bits(k, 5)) == k); }
	CHECK_THROWS(bits_to_index("10x"));
}
