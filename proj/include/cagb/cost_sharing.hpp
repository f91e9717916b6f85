#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace cagb::shapley {

/// Transferable-utility cost game over `members`. The oracle receives a
/// sorted subset of member ids; v(empty) is taken to be 0 and never queried.
struct TUGame
{
	std::vector<int> members;
	std::function<double(const std::vector<int>&)> value;
};

/// Per-player shares aligned with the game's member list.
struct Allocation
{
	std::vector<int> members;
	std::vector<double> shares;

	double at(int player) const;
	double sum() const;
	std::size_t size() const { return members.size(); }
};

inline constexpr std::size_t kMaxExactPlayers = 10;

/// Average marginal contribution over all |N|! join orders, evaluated as the
/// equivalent subset-weighted sum (O(n 2^n) over a memo of all 2^n values).
/// Players are processed in parallel; each share is reduced serially.
Allocation shapley_exact(const TUGame& game);
/// Serial reference for shapley_exact.
Allocation shapley_exact_serial(const TUGame& game);
/// Literal average over all n! orders. Slow; kept as an independent route.
Allocation shapley_permutation_average(const TUGame& game);

/// Monte Carlo estimate over `samples` uniformly random join orders; order
/// s is drawn from a generator seeded with derive_seed(seed, s).
Allocation shapley_montecarlo(const TUGame& game, std::size_t samples, std::uint64_t seed);
/// Serial reference; bit-identical to shapley_montecarlo.
Allocation shapley_montecarlo_serial(const TUGame& game, std::size_t samples, std::uint64_t seed);

} // namespace cagb::shapley
