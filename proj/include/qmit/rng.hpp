#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace qmit
{

inline std::uint64_t splitmix64(std::uint64_t x)
{
	x += 0x9e3779b97f4a7c15ULL;
	x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
	x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
	return x ^ (x >> 31U);
}

/// Derive a child seed from a parent seed and an ordered list of integer tags.
inline std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> tags)
{
	std::uint64_t h = splitmix64(parent);
	for(const auto t : tags) { h = splitmix64(h ^ splitmix64(t + 0x632be59bd9b4e019ULL)); }
	return h;
}

inline std::uint64_t fnv1a64(std::string_view bytes)
{
	std::uint64_t h = 1469598103934665603ULL;
	for(const unsigned char c : bytes)
	{
		h ^= c;
		h *= 1099511628211ULL;
	}
	return h;
}

/// Seedable, splittable random source. Only the engine output is used (never
/// std:: distributions) so streams are identical across standard libraries.
class Rng
{
public:
	explicit Rng(std::uint64_t seed) : seed_{seed}, engine_{seed} { }

	[[nodiscard]] std::uint64_t seed() const { return seed_; }

	[[nodiscard]] Rng split(std::uint64_t tag) const { return Rng{derive_seed(seed_, {tag})}; }

	std::uint64_t next_u64() { return engine_(); }

	/// Uniform in [0, 1) with 53 random bits.
	double uniform() { return static_cast<double>(engine_() >> 11U) * 0x1.0p-53; }

	double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

	bool bernoulli(double p) { return uniform() < p; }

	/// Uniform integer in [0, n).
	std::uint64_t below(std::uint64_t n)
	{
		const auto k = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
		return k < n ? k : n - 1;
	}

private:
	std::uint64_t seed_;
	std::mt19937_64 engine_;
};

} // namespace qmit
