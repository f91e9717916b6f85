#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace cagb {

// Engine shared by every seeded component. mt19937_64 output is fixed by the
// standard, and all distributions below are hand-written, so streams are
// reproducible across standard libraries.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Child seed for stream `index` under `root`.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

// Uniform integer in [0, n). n must be > 0.
std::size_t uniform_index(Rng& rng, std::size_t n);

// Poisson(mean) by sequential inversion; large means are split into chunks
// so that exp(-chunk) never underflows.
std::uint64_t poisson(Rng& rng, double mean);

template <typename T>
void shuffle(std::span<T> items, Rng& rng)
{
	for (std::size_t i = items.size(); i > 1; --i)
	{
		std::size_t j = uniform_index(rng, i);
		using std::swap;
		swap(items[i - 1], items[j]);
	}
}

} // namespace cagb
