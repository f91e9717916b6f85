#include <cagb/rng.hpp>

#include <cmath>
#include <stdexcept>

namespace cagb {

std::uint64_t splitmix64(std::uint64_t x)
{
	x += 0x9E3779B97F4A7C15ULL;
	x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
	x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
	return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index)
{
	return splitmix64(splitmix64(root) ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
}

double uniform01(Rng& rng)
{
	return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(Rng& rng, std::size_t n)
{
	if (n == 0)
	{
		throw std::invalid_argument("uniform_index: empty range");
	}
	// Rejection on the top of the range keeps the draw unbiased.
	const std::uint64_t range = static_cast<std::uint64_t>(n);
	const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % range);
	std::uint64_t x;
	do
	{
		x = rng();
	} while (x >= limit);
	return static_cast<std::size_t>(x % range);
}

namespace {

std::uint64_t poisson_small(Rng& rng, double mean)
{
	const double u = uniform01(rng);
	double p = std::exp(-mean);
	double cdf = p;
	std::uint64_t k = 0;
	while (u >= cdf)
	{
		++k;
		p *= mean / static_cast<double>(k);
		const double next = cdf + p;
		if (next == cdf)
		{
			break; // tail exhausted in double precision
		}
		cdf = next;
	}
	return k;
}

} // namespace

std::uint64_t poisson(Rng& rng, double mean)
{
	if (!(mean >= 0.0) || !std::isfinite(mean))
	{
		throw std::invalid_argument("poisson: mean must be finite and >= 0");
	}
	if (mean == 0.0)
	{
		return 0;
	}
	constexpr double chunk = 500.0;
	std::uint64_t total = 0;
	double rest = mean;
	while (rest > chunk)
	{
		total += poisson_small(rng, chunk);
		rest -= chunk;
	}
	return total + poisson_small(rng, rest);
}

} // namespace cagb
