#pragma once

#include <cagb/topology.hpp>

#include <cstdint>
#include <vector>

namespace cagb::lcg {

/// Channel choice per player, each in [0, channels).
struct LcgState
{
	std::vector<int> actions;
	int channels = 1;
};

/// r_i = 1 / (1 + number of neighbors of i on i's channel).
double reward(int player, const LcgState& state, const topology::NetworkGraph& g);

/// Own reward plus the rewards of all graph neighbors.
double lcg_utility(int player, const LcgState& state, const topology::NetworkGraph& g);

/// Sum of all rewards. Exact potential of lcg_utility.
double potential(const LcgState& state, const topology::NetworkGraph& g);

struct BestResponseMove
{
	int player = 0;
	int from = 0;
	int to = 0;
	double potential = 0.0; // after the move
};

struct BestResponseResult
{
	LcgState state;
	std::vector<BestResponseMove> trace;
	double initial_potential = 0.0;
	bool converged = false;
	int iterations() const { return static_cast<int>(trace.size()); }
};

/// Best reply of `player`: the lowest channel maximizing its utility.
int best_response(int player, const LcgState& state, const topology::NetworkGraph& g);

/// Asynchronous best-response dynamics from a seeded random assignment.
/// Each step scans players in a seeded random order and moves the first one
/// that can strictly improve to its best reply.
BestResponseResult best_response_dynamics(const topology::NetworkGraph& g, int channels, std::uint64_t seed,
                                          int max_iters);

bool is_nash_equilibrium(const LcgState& state, const topology::NetworkGraph& g);
bool collision_free(const LcgState& state, const topology::NetworkGraph& g);

/// Largest potential over all channels^n states; n small.
double max_potential_bruteforce(const topology::NetworkGraph& g, int channels);

} // namespace cagb::lcg
