#include <cagb/cost_sharing.hpp>

#include <cagb/rng.hpp>

#include <algorithm>
#include <bit>
#include <exception>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include <omp.h>

namespace cagb::shapley {

double Allocation::at(int player) const
{
	for (std::size_t i = 0; i < members.size(); ++i)
	{
		if (members[i] == player)
		{
			return shares[i];
		}
	}
	throw std::out_of_range("allocation: player " + std::to_string(player) + " is not a member");
}

double Allocation::sum() const
{
	return std::accumulate(shares.begin(), shares.end(), 0.0);
}

namespace {

void check_members(const TUGame& game)
{
	if (!game.value)
	{
		throw std::invalid_argument("TU game has no value oracle");
	}
	auto sorted = game.members;
	std::sort(sorted.begin(), sorted.end());
	if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
	{
		throw std::invalid_argument("TU game members must be distinct");
	}
}

std::vector<int> subset_of(const TUGame& game, std::uint64_t mask)
{
	std::vector<int> subset;
	for (std::size_t k = 0; k < game.members.size(); ++k)
	{
		if (mask >> k & 1ULL)
		{
			subset.push_back(game.members[k]);
		}
	}
	std::sort(subset.begin(), subset.end());
	return subset;
}

// v over every subset mask; entry 0 is the empty coalition.
std::vector<double> value_table(const TUGame& game)
{
	const std::size_t n = game.members.size();
	if (n > kMaxExactPlayers)
	{
		throw std::invalid_argument("shapley_exact supports at most " + std::to_string(kMaxExactPlayers)
		                            + " players (got " + std::to_string(n) + "); use shapley_montecarlo");
	}
	std::vector<double> table(std::size_t{1} << n, 0.0);
	for (std::uint64_t mask = 1; mask < table.size(); ++mask)
	{
		table[mask] = game.value(subset_of(game, mask));
	}
	return table;
}

void accumulate_order(const std::vector<double>& table, const std::vector<int>& order, std::vector<double>& sums)
{
	std::uint64_t mask = 0;
	for (int k : order)
	{
		const std::uint64_t next = mask | (1ULL << k);
		sums[static_cast<std::size_t>(k)] += table[next] - table[mask];
		mask = next;
	}
}

double factorial(std::size_t n)
{
	double f = 1.0;
	for (std::size_t k = 2; k <= n; ++k)
	{
		f *= static_cast<double>(k);
	}
	return f;
}

Allocation finish(const TUGame& game, std::vector<double> sums, double count)
{
	for (double& s : sums)
	{
		s /= count;
	}
	return Allocation{game.members, std::move(sums)};
}

} // namespace

namespace {

// Weight |S|! (n-|S|-1)! / n! of a coalition S not containing the player.
std::vector<double> subset_weights(std::size_t n)
{
	std::vector<double> w(n, 0.0);
	for (std::size_t s = 0; s < n; ++s)
	{
		w[s] = factorial(s) * factorial(n - s - 1) / factorial(n);
	}
	return w;
}

double player_share(const std::vector<double>& table, const std::vector<double>& weights, std::size_t player)
{
	const std::uint64_t bit = 1ULL << player;
	double share = 0.0;
	for (std::uint64_t mask = 0; mask < table.size(); ++mask)
	{
		if (!(mask & bit))
		{
			share += weights[static_cast<std::size_t>(std::popcount(mask))] * (table[mask | bit] - table[mask]);
		}
	}
	return share;
}

} // namespace

Allocation shapley_exact_serial(const TUGame& game)
{
	check_members(game);
	const std::size_t n = game.members.size();
	const auto table = value_table(game);
	const auto weights = subset_weights(n);
	std::vector<double> shares(n, 0.0);
	for (std::size_t k = 0; k < n; ++k)
	{
		shares[k] = player_share(table, weights, k);
	}
	return Allocation{game.members, std::move(shares)};
}

Allocation shapley_exact(const TUGame& game)
{
	check_members(game);
	const std::size_t n = game.members.size();
	const auto table = value_table(game);
	const auto weights = subset_weights(n);
	std::vector<double> shares(n, 0.0);

#pragma omp parallel for schedule(static)
	for (std::int64_t k = 0; k < static_cast<std::int64_t>(n); ++k)
	{
		shares[static_cast<std::size_t>(k)] = player_share(table, weights, static_cast<std::size_t>(k));
	}
	return Allocation{game.members, std::move(shares)};
}

Allocation shapley_permutation_average(const TUGame& game)
{
	check_members(game);
	const std::size_t n = game.members.size();
	const auto table = value_table(game);
	std::vector<double> sums(n, 0.0);
	std::vector<int> order(n);
	std::iota(order.begin(), order.end(), 0);
	do
	{
		accumulate_order(table, order, sums);
	} while (std::next_permutation(order.begin(), order.end()));
	return finish(game, std::move(sums), factorial(n));
}

namespace {

constexpr std::size_t kSampleBlock = 256;

class MemoValue
{
public:
	explicit MemoValue(const TUGame& game) : game_(game) {}

	double operator()(std::uint64_t mask)
	{
		if (mask == 0)
		{
			return 0.0;
		}
		auto it = memo_.find(mask);
		if (it == memo_.end())
		{
			it = memo_.emplace(mask, game_.value(subset_of(game_, mask))).first;
		}
		return it->second;
	}

private:
	const TUGame& game_;
	std::unordered_map<std::uint64_t, double> memo_;
};

void sample_block(const TUGame& game, MemoValue& v, std::size_t block, std::size_t samples, std::uint64_t seed,
                  std::vector<double>& sums)
{
	const std::size_t n = game.members.size();
	const std::size_t begin = block * kSampleBlock;
	const std::size_t end = std::min(samples, begin + kSampleBlock);
	std::vector<int> order(n);
	for (std::size_t s = begin; s < end; ++s)
	{
		std::iota(order.begin(), order.end(), 0);
		Rng rng(derive_seed(seed, s));
		shuffle(std::span<int>(order), rng);
		std::uint64_t mask = 0;
		double prev = 0.0;
		for (int k : order)
		{
			mask |= 1ULL << k;
			const double cur = v(mask);
			sums[static_cast<std::size_t>(k)] += cur - prev;
			prev = cur;
		}
	}
}

void check_sampling(const TUGame& game, std::size_t samples)
{
	check_members(game);
	if (samples < 1)
	{
		throw std::invalid_argument("shapley_montecarlo: samples must be >= 1");
	}
	if (game.members.size() > 64)
	{
		throw std::invalid_argument("shapley_montecarlo supports at most 64 players");
	}
}

} // namespace

Allocation shapley_montecarlo_serial(const TUGame& game, std::size_t samples, std::uint64_t seed)
{
	check_sampling(game, samples);
	const std::size_t n = game.members.size();
	const std::size_t blocks = (samples + kSampleBlock - 1) / kSampleBlock;
	MemoValue v(game);
	std::vector<double> sums(n, 0.0);
	for (std::size_t b = 0; b < blocks; ++b)
	{
		std::vector<double> block_sums(n, 0.0);
		sample_block(game, v, b, samples, seed, block_sums);
		for (std::size_t k = 0; k < n; ++k)
		{
			sums[k] += block_sums[k];
		}
	}
	return finish(game, std::move(sums), static_cast<double>(samples));
}

Allocation shapley_montecarlo(const TUGame& game, std::size_t samples, std::uint64_t seed)
{
	check_sampling(game, samples);
	const std::size_t n = game.members.size();
	const std::size_t blocks = (samples + kSampleBlock - 1) / kSampleBlock;
	if (blocks == 1)
	{
		return shapley_montecarlo_serial(game, samples, seed);
	}
	std::vector<std::vector<double>> partial(blocks, std::vector<double>(n, 0.0));
	std::exception_ptr failure;

#pragma omp parallel
	{
		MemoValue v(game);
#pragma omp for schedule(static)
		for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b)
		{
			try
			{
				sample_block(game, v, static_cast<std::size_t>(b), samples, seed, partial[static_cast<std::size_t>(b)]);
			}
			catch (...)
			{
#pragma omp critical(cagb_shapley_failure)
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

	std::vector<double> sums(n, 0.0);
	for (const auto& p : partial)
	{
		for (std::size_t k = 0; k < n; ++k)
		{
			sums[k] += p[k];
		}
	}
	return finish(game, std::move(sums), static_cast<double>(samples));
}

} // namespace cagb::shapley
