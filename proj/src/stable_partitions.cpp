#include <cagb/coalition_engine.hpp>

#include <algorithm>
#include <exception>
#include <stdexcept>

#include <omp.h>

namespace cagb::coalition {

std::vector<std::vector<int>> restricted_growth_strings(int n)
{
	std::vector<std::vector<int>> out;
	if (n <= 0)
	{
		out.emplace_back();
		return out;
	}
	std::vector<int> labels(static_cast<std::size_t>(n), 0);
	std::vector<int> prefix_max(static_cast<std::size_t>(n), 0);
	while (true)
	{
		out.push_back(labels);
		// Rightmost position that can still grow: labels[i] <= max(labels[0..i-1]).
		int i = n - 1;
		while (i > 0 && labels[static_cast<std::size_t>(i)] > prefix_max[static_cast<std::size_t>(i - 1)])
		{
			--i;
		}
		if (i == 0)
		{
			break;
		}
		auto ui = static_cast<std::size_t>(i);
		++labels[ui];
		prefix_max[ui] = std::max(prefix_max[ui - 1], labels[ui]);
		for (std::size_t j = ui + 1; j < labels.size(); ++j)
		{
			labels[j] = 0;
			prefix_max[j] = prefix_max[ui];
		}
	}
	return out;
}

bool StableSet::contains(const Partition& p) const
{
	return std::binary_search(partitions.begin(), partitions.end(), p);
}

namespace {

void check_oracle_size(const GameSpec& game, const Neighborhood& nbr)
{
	if (game.n_players > kMaxOraclePlayers)
	{
		throw std::invalid_argument("enumerate_stable_partitions: n_players = " + std::to_string(game.n_players)
		                            + " exceeds the brute-force limit of " + std::to_string(kMaxOraclePlayers));
	}
	if (game.n_players < 1 || nbr.size() != static_cast<std::size_t>(game.n_players))
	{
		throw std::invalid_argument("enumerate_stable_partitions: player count mismatch");
	}
}

bool stable_candidate(UtilityCache& cache, const Neighborhood& nbr, const Partition& p, PreferenceOrder order)
{
	return respects_feasibility(cache, p) && !find_approved_move(cache, nbr, p, order);
}

} // namespace

StableSet enumerate_stable_partitions_serial(const GameSpec& game, const Neighborhood& nbr, PreferenceOrder order)
{
	check_oracle_size(game, nbr);
	const auto strings = restricted_growth_strings(game.n_players);
	StableSet out;
	out.scanned = strings.size();
	UtilityCache cache(game);
	for (const auto& labels : strings)
	{
		Partition p = Partition::from_labels(labels);
		if (stable_candidate(cache, nbr, p, order))
		{
			out.partitions.push_back(std::move(p));
		}
	}
	std::sort(out.partitions.begin(), out.partitions.end());
	return out;
}

StableSet enumerate_stable_partitions(const GameSpec& game, const Neighborhood& nbr, PreferenceOrder order)
{
	check_oracle_size(game, nbr);
	const auto strings = restricted_growth_strings(game.n_players);
	const auto count = static_cast<std::int64_t>(strings.size());
	std::vector<char> stable(strings.size(), 0);
	std::exception_ptr failure;

#pragma omp parallel
	{
		UtilityCache cache(game);
#pragma omp for schedule(dynamic, 256)
		for (std::int64_t i = 0; i < count; ++i)
		{
			const auto ui = static_cast<std::size_t>(i);
			try
			{
				stable[ui] = stable_candidate(cache, nbr, Partition::from_labels(strings[ui]), order) ? 1 : 0;
			}
			catch (...)
			{
#pragma omp critical(cagb_oracle_failure)
				if (!failure)
				{
					failure = std::current_exception();
				}
			}
		}
	}
	if (failure)
	{
		std::rethrow_exception(failure);
	}

	StableSet out;
	out.scanned = strings.size();
	for (std::size_t i = 0; i < strings.size(); ++i)
	{
		if (stable[i])
		{
			out.partitions.push_back(Partition::from_labels(strings[i]));
		}
	}
	std::sort(out.partitions.begin(), out.partitions.end());
	return out;
}

} // namespace cagb::coalition
