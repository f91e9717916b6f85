#pragma once

// Independent Shapley reference for tests: a literal walk over all join
// orders with std::next_permutation, no memo, no subset weights.

#include <cagb/cost_sharing.hpp>
#include <cagb/rng.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <vector>

namespace cagb::testing {

inline std::map<int, double> shapley_by_orders(const shapley::TUGame& game)
{
	std::vector<int> order = game.members;
	std::sort(order.begin(), order.end());
	std::map<int, double> sum;
	for (int p : order)
	{
		sum[p] = 0.0;
	}
	double count = 0.0;
	do
	{
		std::vector<int> prefix;
		double prev = 0.0;
		for (int p : order)
		{
			prefix.insert(std::upper_bound(prefix.begin(), prefix.end(), p), p);
			const double v = game.value(prefix);
			sum[p] += v - prev;
			prev = v;
		}
		count += 1.0;
	} while (std::next_permutation(order.begin(), order.end()));
	for (auto& [p, s] : sum)
	{
		s /= count;
	}
	return sum;
}

/// Bitmask-indexed random game on members 0..n-1 with v(empty) = 0.
inline shapley::TUGame random_tu_game(int n, std::uint64_t seed, double scale = 10.0)
{
	auto table = std::make_shared<std::vector<double>>(std::size_t{1} << n, 0.0);
	Rng rng(seed);
	for (std::size_t m = 1; m < table->size(); ++m)
	{
		(*table)[m] = scale * uniform01(rng);
	}
	shapley::TUGame g;
	for (int i = 0; i < n; ++i)
	{
		g.members.push_back(i);
	}
	g.value = [table](const std::vector<int>& s) {
		std::size_t mask = 0;
		for (int p : s)
		{
			mask |= std::size_t{1} << p;
		}
		return (*table)[mask];
	};
	return g;
}

/// Weighted coverage cost: each player covers a random set of items, the
/// value is the total weight of the union. Coverage functions are submodular.
inline shapley::TUGame random_coverage_game(int n, std::uint64_t seed, int items = 12)
{
	Rng rng(seed);
	auto weights = std::make_shared<std::vector<double>>();
	for (int k = 0; k < items; ++k)
	{
		weights->push_back(0.5 + uniform01(rng) * 4.5);
	}
	auto covers = std::make_shared<std::vector<std::vector<bool>>>(std::size_t(n), std::vector<bool>(std::size_t(items)));
	for (auto& row : *covers)
	{
		for (std::size_t k = 0; k < row.size(); ++k)
		{
			row[k] = uniform01(rng) < 0.35;
		}
	}
	shapley::TUGame g;
	for (int i = 0; i < n; ++i)
	{
		g.members.push_back(i);
	}
	g.value = [weights, covers](const std::vector<int>& s) {
		double v = 0.0;
		for (std::size_t k = 0; k < weights->size(); ++k)
		{
			for (int p : s)
			{
				if ((*covers)[std::size_t(p)][k])
				{
					v += (*weights)[k];
					break;
				}
			}
		}
		return v;
	};
	return g;
}

inline double max_error(const shapley::Allocation& a, const shapley::Allocation& b)
{
	double e = 0.0;
	for (std::size_t k = 0; k < a.size(); ++k)
	{
		e = std::max(e, std::abs(a.shares[k] - b.shares[k]));
	}
	return e;
}

inline double range_of(const shapley::Allocation& a)
{
	const auto [lo, hi] = std::minmax_element(a.shares.begin(), a.shares.end());
	return *hi - *lo;
}

} // namespace cagb::testing
