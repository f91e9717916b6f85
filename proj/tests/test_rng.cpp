#include <cagb/rng.hpp>

#include <doctest.h>

#include <stdexcept>
#include <vector>

using namespace cagb;

TEST_CASE("uniform01 stays in [0, 1) and is reproducible")
{
	Rng a(42);
	Rng b(42);
	for (int i = 0; i < 1000; ++i)
	{
		const double x = uniform01(a);
		CHECK(x >= 0.0);
		CHECK(x < 1.0);
		CHECK(x == uniform01(b));
	}
}

TEST_CASE("uniform_index covers the range evenly")
{
	Rng rng(7);
	std::vector<int> counts(6, 0);
	const int draws = 60000;
	for (int i = 0; i < draws; ++i)
	{
		++counts[uniform_index(rng, 6)];
	}
	// Binomial(60000, 1/6): sd ~ 91; allow 5 sd.
	for (int c : counts)
	{
		CHECK(c > 10000 - 460);
		CHECK(c < 10000 + 460);
	}
	CHECK_THROWS_AS(uniform_index(rng, 0), std::invalid_argument);
}

TEST_CASE("poisson handles zero, small and very large means")
{
	Rng rng(3);
	CHECK(poisson(rng, 0.0) == 0);
	CHECK_THROWS(poisson(rng, -1.0));

	// exp(-1e5) underflows; chunking must still give a count near the mean.
	const double big = 1e5;
	const auto n = static_cast<double>(poisson(rng, big));
	CHECK(n > big - 5 * 316.3);
	CHECK(n < big + 5 * 316.3);
}

TEST_CASE("derive_seed separates streams")
{
	CHECK(derive_seed(1, 0) != derive_seed(1, 1));
	CHECK(derive_seed(1, 0) != derive_seed(2, 0));
	CHECK(derive_seed(9, 4) == derive_seed(9, 4));
}
