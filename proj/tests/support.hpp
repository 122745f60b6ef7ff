#pragma once

// Dense helpers for oracle checks. Kept independent of the simulator's
// in-place update paths: everything here is built from Kronecker products.

#include "qmit/qsim.hpp"
#include "qmit/rng.hpp"

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace qtest
{

using cx = std::complex<double>;
using Eigen::MatrixXcd;

inline Eigen::Matrix2cd pauli(char p)
{
	Eigen::Matrix2cd m;
	switch(p)
	{
	case 'X': m << 0, 1, 1, 0; break;
	case 'Y': m << 0, cx{0, -1}, cx{0, 1}, 0; break;
	case 'Z': m << 1, 0, 0, -1; break;
	default: m.setIdentity(); break;
	}
	return m;
}

inline MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b)
{
	MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
	for(Eigen::Index i = 0; i < a.rows(); ++i)
	{
		for(Eigen::Index j = 0; j < a.cols(); ++j) { out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b; }
	}
	return out;
}

/// Tensor product of per-qubit 2x2 factors, qubit 0 leftmost (most significant).
inline MatrixXcd embed(int n, const std::vector<std::pair<int, Eigen::Matrix2cd>>& factors)
{
	MatrixXcd out = MatrixXcd::Identity(1, 1);
	for(int q = 0; q < n; ++q)
	{
		MatrixXcd f = Eigen::Matrix2cd::Identity();
		for(const auto& [k, m] : factors)
		{
			if(k == q) { f = m; }
		}
		out = kron(out, f);
	}
	return out;
}

/// Pauli string like "XIZ..." (length n).
inline MatrixXcd pauli_string(const std::string& s)
{
	MatrixXcd out = MatrixXcd::Identity(1, 1);
	for(const char c : s) { out = kron(out, pauli(c)); }
	return out;
}

/// exp(-i theta P) for a Pauli string P (P^2 = I).
inline MatrixXcd pauli_rotation(const std::string& s, double theta)
{
	const MatrixXcd p = pauli_string(s);
	return std::cos(theta) * MatrixXcd::Identity(p.rows(), p.cols()) - cx{0, std::sin(theta)} * p;
}

inline std::string two_site(int n, int a, int b, char p)
{
	std::string s(static_cast<std::size_t>(n), 'I');
	s[static_cast<std::size_t>(a)] = p;
	s[static_cast<std::size_t>(b)] = p;
	return s;
}

inline std::string one_site(int n, int a, char p)
{
	std::string s(static_cast<std::size_t>(n), 'I');
	s[static_cast<std::size_t>(a)] = p;
	return s;
}

inline double gauss(qmit::Rng& rng)
{
	// Box-Muller on the portable uniform stream
	const double u1 = rng.uniform(1e-300, 1.0), u2 = rng.uniform();
	return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

inline MatrixXcd random_unitary(int dim, qmit::Rng& rng)
{
	MatrixXcd a(dim, dim);
	for(int i = 0; i < dim; ++i)
	{
		for(int j = 0; j < dim; ++j) { a(i, j) = cx{gauss(rng), gauss(rng)}; }
	}
	Eigen::HouseholderQR<MatrixXcd> qr(a);
	return qr.householderQ();
}

/// Random full-rank mixed state.
inline qmit::DensityMatrix random_density(int n, qmit::Rng& rng)
{
	const int dim = 1 << n;
	MatrixXcd a(dim, dim);
	for(int i = 0; i < dim; ++i)
	{
		for(int j = 0; j < dim; ++j) { a(i, j) = cx{gauss(rng), gauss(rng)}; }
	}
	MatrixXcd rho = a * a.adjoint();
	rho /= rho.trace();
	return qmit::DensityMatrix(n, rho);
}

inline qmit::DensityMatrix random_pure(int n, qmit::Rng& rng)
{
	const int dim = 1 << n;
	Eigen::VectorXcd v(dim);
	for(int i = 0; i < dim; ++i) { v(i) = cx{gauss(rng), gauss(rng)}; }
	v.normalize();
	return qmit::DensityMatrix(n, v * v.adjoint());
}

inline double max_abs(const MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace qtest
