#include <cagb/lcg.hpp>

#include <cagb/rng.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cagb::lcg {

namespace {

constexpr double kImprovement = 1e-12;

void check_state(const LcgState& state, const topology::NetworkGraph& g)
{
	if (state.channels < 1)
	{
		throw std::invalid_argument("lcg: need at least one channel");
	}
	if (state.actions.size() != g.size())
	{
		throw std::invalid_argument("lcg: state size does not match the graph");
	}
	for (int a : state.actions)
	{
		if (a < 0 || a >= state.channels)
		{
			throw std::invalid_argument("lcg: action out of range");
		}
	}
}

int collisions(int player, const LcgState& state, const topology::NetworkGraph& g)
{
	const int mine = state.actions[static_cast<std::size_t>(player)];
	int count = 0;
	for (int j : g.neighbors(player))
	{
		count += state.actions[static_cast<std::size_t>(j)] == mine;
	}
	return count;
}

double local_utility(int player, const LcgState& state, const topology::NetworkGraph& g)
{
	double u = 1.0 / (1.0 + collisions(player, state, g));
	for (int j : g.neighbors(player))
	{
		u += 1.0 / (1.0 + collisions(j, state, g));
	}
	return u;
}

} // namespace

double reward(int player, const LcgState& state, const topology::NetworkGraph& g)
{
	check_state(state, g);
	return 1.0 / (1.0 + collisions(player, state, g));
}

double lcg_utility(int player, const LcgState& state, const topology::NetworkGraph& g)
{
	check_state(state, g);
	return local_utility(player, state, g);
}

double potential(const LcgState& state, const topology::NetworkGraph& g)
{
	check_state(state, g);
	double phi = 0.0;
	for (std::size_t i = 0; i < g.size(); ++i)
	{
		phi += 1.0 / (1.0 + collisions(static_cast<int>(i), state, g));
	}
	return phi;
}

int best_response(int player, const LcgState& state, const topology::NetworkGraph& g)
{
	check_state(state, g);
	LcgState trial = state;
	int best = 0;
	double best_u = -1.0;
	for (int k = 0; k < state.channels; ++k)
	{
		trial.actions[static_cast<std::size_t>(player)] = k;
		const double u = local_utility(player, trial, g);
		if (u > best_u + kImprovement)
		{
			best_u = u;
			best = k;
		}
	}
	return best;
}

namespace {

// Best reply if it strictly beats the current action, else -1.
int improving_reply(int player, const LcgState& state, const topology::NetworkGraph& g)
{
	const int current = state.actions[static_cast<std::size_t>(player)];
	const double now = local_utility(player, state, g);
	const int reply = best_response(player, state, g);
	if (reply == current)
	{
		return -1;
	}
	LcgState trial = state;
	trial.actions[static_cast<std::size_t>(player)] = reply;
	return local_utility(player, trial, g) > now + kImprovement ? reply : -1;
}

} // namespace

BestResponseResult best_response_dynamics(const topology::NetworkGraph& g, int channels, std::uint64_t seed,
                                          int max_iters)
{
	if (channels < 1)
	{
		throw std::invalid_argument("best_response_dynamics: channels must be >= 1");
	}
	if (max_iters < 1)
	{
		throw std::invalid_argument("best_response_dynamics: max_iters must be >= 1");
	}
	Rng rng(seed);
	BestResponseResult out;
	out.state.channels = channels;
	out.state.actions.resize(g.size());
	for (auto& a : out.state.actions)
	{
		a = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(channels)));
	}
	out.initial_potential = potential(out.state, g);

	std::vector<int> order(g.size());
	while (true)
	{
		std::iota(order.begin(), order.end(), 0);
		shuffle(std::span<int>(order), rng);
		int mover = -1;
		int reply = -1;
		for (int p : order)
		{
			reply = improving_reply(p, out.state, g);
			if (reply >= 0)
			{
				mover = p;
				break;
			}
		}
		if (mover < 0)
		{
			out.converged = true;
			break;
		}
		if (out.iterations() == max_iters)
		{
			break;
		}
		const int from = out.state.actions[static_cast<std::size_t>(mover)];
		out.state.actions[static_cast<std::size_t>(mover)] = reply;
		out.trace.push_back(BestResponseMove{mover, from, reply, potential(out.state, g)});
	}
	return out;
}

bool is_nash_equilibrium(const LcgState& state, const topology::NetworkGraph& g)
{
	check_state(state, g);
	LcgState trial = state;
	for (std::size_t i = 0; i < g.size(); ++i)
	{
		const int player = static_cast<int>(i);
		const double now = local_utility(player, state, g);
		for (int k = 0; k < state.channels; ++k)
		{
			trial.actions[i] = k;
			if (local_utility(player, trial, g) > now + kImprovement)
			{
				return false;
			}
		}
		trial.actions[i] = state.actions[i];
	}
	return true;
}

bool collision_free(const LcgState& state, const topology::NetworkGraph& g)
{
	check_state(state, g);
	for (std::size_t i = 0; i < g.size(); ++i)
	{
		if (collisions(static_cast<int>(i), state, g) > 0)
		{
			return false;
		}
	}
	return true;
}

double max_potential_bruteforce(const topology::NetworkGraph& g, int channels)
{
	if (channels < 1)
	{
		throw std::invalid_argument("max_potential_bruteforce: channels must be >= 1");
	}
	const double states = std::pow(static_cast<double>(channels), static_cast<double>(g.size()));
	if (states > 2e7)
	{
		throw std::invalid_argument("max_potential_bruteforce: state space too large");
	}
	LcgState s{std::vector<int>(g.size(), 0), channels};
	double best = potential(s, g);
	while (true)
	{
		std::size_t i = 0;
		while (i < s.actions.size() && s.actions[i] == channels - 1)
		{
			s.actions[i++] = 0;
		}
		if (i == s.actions.size())
		{
			break;
		}
		++s.actions[i];
		best = std::max(best, potential(s, g));
	}
	return best;
}

} // namespace cagb::lcg
