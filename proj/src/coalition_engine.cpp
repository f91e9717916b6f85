#include <cagb/coalition_engine.hpp>

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace cagb::coalition {

std::string to_string(PreferenceOrder order)
{
	switch (order)
	{
	case PreferenceOrder::pareto: return "pareto";
	case PreferenceOrder::coalition: return "coalition";
	case PreferenceOrder::selfish: return "selfish";
	}
	return "pareto";
}

std::string to_string(Dynamics dynamics)
{
	switch (dynamics)
	{
	case Dynamics::merge_split: return "merge-split";
	case Dynamics::switch_only: return "switch";
	case Dynamics::switch_swap: return "switch+swap";
	}
	return "switch";
}

std::string to_string(Status status)
{
	switch (status)
	{
	case Status::stable: return "stable";
	case Status::cycle_detected: return "cycle-detected";
	case Status::iteration_cap: return "iteration-cap";
	}
	return "stable";
}

PreferenceOrder preference_order_from_string(const std::string& name)
{
	if (name == "pareto") return PreferenceOrder::pareto;
	if (name == "coalition") return PreferenceOrder::coalition;
	if (name == "selfish") return PreferenceOrder::selfish;
	throw std::invalid_argument("unknown preference order '" + name + "'");
}

Dynamics dynamics_from_string(const std::string& name)
{
	if (name == "merge-split") return Dynamics::merge_split;
	if (name == "switch") return Dynamics::switch_only;
	if (name == "switch+swap") return Dynamics::switch_swap;
	throw std::invalid_argument("unknown dynamics '" + name + "'");
}

double GameSpec::utility(int player, const Coalition& c) const
{
	const auto it = std::lower_bound(c.members.begin(), c.members.end(), player);
	if (it == c.members.end() || *it != player)
	{
		throw std::invalid_argument("utility: player " + std::to_string(player) + " not in " + c.to_string());
	}
	return utilities(c).at(static_cast<std::size_t>(it - c.members.begin()));
}

Neighborhood::Neighborhood(std::vector<std::vector<int>> adjacency) : adj_(std::move(adjacency))
{
	for (auto& row : adj_)
	{
		std::sort(row.begin(), row.end());
	}
}

Neighborhood Neighborhood::from_graph(const topology::NetworkGraph& g)
{
	std::vector<std::vector<int>> adj(g.size());
	for (std::size_t i = 0; i < g.size(); ++i)
	{
		adj[i] = g.neighbors(static_cast<int>(i));
	}
	return Neighborhood(std::move(adj));
}

Neighborhood Neighborhood::complete(int n_players)
{
	std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_players));
	for (int i = 0; i < n_players; ++i)
	{
		for (int j = 0; j < n_players; ++j)
		{
			if (i != j)
			{
				adj[static_cast<std::size_t>(i)].push_back(j);
			}
		}
	}
	return Neighborhood(std::move(adj));
}

std::size_t UtilityCache::KeyHash::operator()(const std::vector<int>& key) const
{
	std::uint64_t h = 0xcbf29ce484222325ULL;
	for (int v : key)
	{
		h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
		h *= 0x100000001b3ULL;
	}
	return static_cast<std::size_t>(h);
}

const std::vector<double>& UtilityCache::utilities(const Coalition& c)
{
	auto it = values_.find(c.members);
	if (it == values_.end())
	{
		auto values = game_->utilities(c);
		if (values.size() != c.size())
		{
			throw std::logic_error("utility oracle returned " + std::to_string(values.size()) + " values for "
			                       + c.to_string());
		}
		it = values_.emplace(c.members, std::move(values)).first;
	}
	return it->second;
}

double UtilityCache::utility(int player, const Coalition& c)
{
	const auto pos = std::lower_bound(c.members.begin(), c.members.end(), player);
	if (pos == c.members.end() || *pos != player)
	{
		throw std::invalid_argument("utility: player " + std::to_string(player) + " not in " + c.to_string());
	}
	return utilities(c)[static_cast<std::size_t>(pos - c.members.begin())];
}

double UtilityCache::total(const Coalition& c)
{
	if (c.empty())
	{
		return 0.0;
	}
	const auto& u = utilities(c);
	return std::accumulate(u.begin(), u.end(), 0.0);
}

bool UtilityCache::feasible(const Coalition& c)
{
	if (c.size() <= 1)
	{
		return true;
	}
	auto it = feasible_.find(c.members);
	if (it == feasible_.end())
	{
		it = feasible_.emplace(c.members, game_->feasible(c)).first;
	}
	return it->second;
}

double UtilityCache::potential(const Partition& p)
{
	double sum = 0.0;
	for (const auto& c : p.coalitions())
	{
		sum += total(c);
	}
	return sum;
}

std::string Move::to_string() const
{
	return "player " + std::to_string(mover) + ": " + origin.to_string() + " -> "
	       + (destination.empty() ? std::string("new") : destination.to_string());
}

namespace {

bool gains(double after, double before)
{
	return after > before + kUtilityTolerance;
}

bool keeps(double after, double before)
{
	return after >= before - kUtilityTolerance;
}

// Every member of `before_c` that is also in `after_c` keeps its utility.
bool members_keep(UtilityCache& cache, const Coalition& before_c, const Coalition& after_c)
{
	for (int k : before_c.members)
	{
		if (after_c.contains(k) && !keeps(cache.utility(k, after_c), cache.utility(k, before_c)))
		{
			return false;
		}
	}
	return true;
}

} // namespace

Verdict approves(PreferenceOrder order, UtilityCache& cache, const Move& move)
{
	if (!move.origin.contains(move.mover) || move.destination.contains(move.mover))
	{
		throw std::invalid_argument("malformed move: " + move.to_string());
	}
	const Coalition joined = move.destination.with(move.mover);
	const Coalition left = move.origin.without(move.mover);
	if (!cache.feasible(joined) || !cache.feasible(left))
	{
		return Verdict::infeasible;
	}
	const double before = cache.utility(move.mover, move.origin);
	const double after = cache.utility(move.mover, joined);
	bool ok = false;
	switch (order)
	{
	case PreferenceOrder::pareto:
		ok = gains(after, before) && members_keep(cache, move.origin, left)
		     && members_keep(cache, move.destination, joined);
		break;
	case PreferenceOrder::coalition:
		ok = cache.total(joined) > cache.total(move.destination) + before + kUtilityTolerance;
		break;
	case PreferenceOrder::selfish:
		ok = gains(after, before) && members_keep(cache, move.destination, joined);
		break;
	}
	return ok ? Verdict::approved : Verdict::rejected;
}

Verdict approves(PreferenceOrder order, const GameSpec& game, const Move& move)
{
	UtilityCache cache(game);
	return approves(order, cache, move);
}

bool approves_regrouping(PreferenceOrder order, UtilityCache& cache, const std::vector<Coalition>& before,
                         const std::vector<Coalition>& after)
{
	for (const auto& c : after)
	{
		if (!cache.feasible(c))
		{
			return false;
		}
	}
	if (order == PreferenceOrder::coalition)
	{
		double old_total = 0.0;
		double new_total = 0.0;
		for (const auto& c : before)
		{
			old_total += cache.total(c);
		}
		for (const auto& c : after)
		{
			new_total += cache.total(c);
		}
		return new_total > old_total + kUtilityTolerance;
	}
	// Pareto (and the selfish fallback): nobody loses, somebody gains.
	bool strict = false;
	for (const auto& b : before)
	{
		for (int k : b.members)
		{
			const Coalition* home = nullptr;
			for (const auto& a : after)
			{
				if (a.contains(k))
				{
					home = &a;
					break;
				}
			}
			const double u_before = cache.utility(k, b);
			const double u_after = cache.utility(k, *home);
			if (!keeps(u_after, u_before))
			{
				return false;
			}
			strict = strict || gains(u_after, u_before);
		}
	}
	return strict;
}

std::optional<Step> merge_step(UtilityCache& cache, const Partition& p, PreferenceOrder order)
{
	const auto& cs = p.coalitions();
	for (std::size_t a = 0; a < cs.size(); ++a)
	{
		for (std::size_t b = a + 1; b < cs.size(); ++b)
		{
			const Coalition merged = Coalition::unite(cs[a], cs[b]);
			if (approves_regrouping(order, cache, {cs[a], cs[b]}, {merged}))
			{
				return Step{p.merged(a, b), "merge " + cs[a].to_string() + "+" + cs[b].to_string()};
			}
		}
	}
	return std::nullopt;
}

namespace {

std::pair<Coalition, Coalition> bipartition(const Coalition& c, std::uint64_t mask)
{
	// Bit k of mask places members[k + 1] in the second part; members[0]
	// always stays in the first part.
	Coalition first;
	Coalition second;
	first.members.push_back(c.members[0]);
	for (std::size_t k = 1; k < c.size(); ++k)
	{
		if (mask >> (k - 1) & 1ULL)
		{
			second.members.push_back(c.members[k]);
		}
		else
		{
			first.members.push_back(c.members[k]);
		}
	}
	return {std::move(first), std::move(second)};
}

std::optional<Step> try_split(UtilityCache& cache, const Partition& p, std::size_t index, PreferenceOrder order,
                              std::uint64_t mask)
{
	const Coalition& c = p.coalitions()[index];
	auto [first, second] = bipartition(c, mask);
	if (approves_regrouping(order, cache, {c}, {first, second}))
	{
		return Step{p.split(index, first, second),
		            "split " + c.to_string() + "->" + first.to_string() + "|" + second.to_string()};
	}
	return std::nullopt;
}

} // namespace

std::optional<Step> split_step(UtilityCache& cache, const Partition& p, PreferenceOrder order, Rng& rng,
                               SplitStats* stats)
{
	const auto& cs = p.coalitions();
	for (std::size_t index = 0; index < cs.size(); ++index)
	{
		const std::size_t s = cs[index].size();
		if (s < 2)
		{
			continue;
		}
		if (s <= kSplitEnumerationCap)
		{
			const std::uint64_t count = 1ULL << (s - 1);
			for (std::uint64_t mask = 1; mask < count; ++mask)
			{
				if (auto step = try_split(cache, p, index, order, mask))
				{
					return step;
				}
			}
			continue;
		}
		if (stats)
		{
			++stats->sampled_coalitions;
		}
		const std::size_t free_bits = std::min<std::size_t>(s - 1, 63);
		for (std::size_t draw = 0; draw < kSplitSampleCount; ++draw)
		{
			std::uint64_t mask = 0;
			while (mask == 0)
			{
				mask = rng() & ((1ULL << free_bits) - 1);
			}
			if (auto step = try_split(cache, p, index, order, mask))
			{
				return step;
			}
		}
	}
	return std::nullopt;
}

namespace {

// Destinations for `player`: coalitions holding a neighbor, plus a new
// singleton when the player is not alone. Sorted by coalition index.
std::vector<std::size_t> switch_destinations(const Neighborhood& nbr, const Partition& p, int player)
{
	const std::size_t home = p.index_of(player);
	std::vector<std::size_t> dest;
	for (int q : nbr.neighbors(player))
	{
		const std::size_t k = p.index_of(q);
		if (k != home)
		{
			dest.push_back(k);
		}
	}
	std::sort(dest.begin(), dest.end());
	dest.erase(std::unique(dest.begin(), dest.end()), dest.end());
	if (p.coalitions()[home].size() > 1)
	{
		dest.push_back(Partition::npos);
	}
	return dest;
}

Move make_move(const Partition& p, int player, std::size_t dest)
{
	return Move{player, p.coalition_of(player), dest == Partition::npos ? Coalition{} : p.coalitions()[dest]};
}

} // namespace

std::optional<Step> switch_step(UtilityCache& cache, const Neighborhood& nbr, const Partition& p,
                                PreferenceOrder order, Rng& rng)
{
	std::vector<int> players(static_cast<std::size_t>(p.n_players()));
	std::iota(players.begin(), players.end(), 0);
	shuffle(std::span<int>(players), rng);
	for (int player : players)
	{
		auto dest = switch_destinations(nbr, p, player);
		shuffle(std::span<std::size_t>(dest), rng);
		for (std::size_t d : dest)
		{
			const Move move = make_move(p, player, d);
			if (approves(order, cache, move) == Verdict::approved)
			{
				return Step{p.moved(player, d), "switch " + move.to_string()};
			}
		}
	}
	return std::nullopt;
}

std::optional<Step> swap_step(UtilityCache& cache, const Partition& p, PreferenceOrder order, Rng& rng)
{
	std::vector<std::pair<int, int>> pairs;
	for (int a = 0; a < p.n_players(); ++a)
	{
		for (int b = a + 1; b < p.n_players(); ++b)
		{
			const std::size_t ia = p.index_of(a);
			const std::size_t ib = p.index_of(b);
			if (ia != ib && (p.coalitions()[ia].size() > 1 || p.coalitions()[ib].size() > 1))
			{
				pairs.emplace_back(a, b);
			}
		}
	}
	shuffle(std::span<std::pair<int, int>>(pairs), rng);
	for (auto [x, y] : pairs)
	{
		// Either player may leave first; try both, starting at random.
		const bool flip = uniform_index(rng, 2) == 1;
		for (int attempt = 0; attempt < 2; ++attempt)
		{
			const bool x_first = (attempt == 0) != flip;
			const int a = x_first ? x : y;
			const int b = x_first ? y : x;
			const Coalition& from_a = p.coalition_of(a);
			const Coalition& from_b = p.coalition_of(b);
			// Phase 1: a leaves its coalition and joins b's.
			if (approves(order, cache, Move{a, from_a, from_b}) != Verdict::approved)
			{
				continue;
			}
			// Phase 2, on the intermediate configuration: b leaves for a's old mates.
			if (approves(order, cache, Move{b, from_b.with(a), from_a.without(a)}) != Verdict::approved)
			{
				continue;
			}
			return Step{p.swapped(a, b), "swap " + std::to_string(a) + "<->" + std::to_string(b)};
		}
	}
	return std::nullopt;
}

std::optional<Move> find_approved_move(UtilityCache& cache, const Neighborhood& nbr, const Partition& p,
                                       PreferenceOrder order)
{
	for (int player = 0; player < p.n_players(); ++player)
	{
		for (std::size_t d : switch_destinations(nbr, p, player))
		{
			Move move = make_move(p, player, d);
			if (approves(order, cache, move) == Verdict::approved)
			{
				return move;
			}
		}
	}
	return std::nullopt;
}

bool is_stable(const GameSpec& game, const Neighborhood& nbr, const Partition& p, PreferenceOrder order)
{
	UtilityCache cache(game);
	return !find_approved_move(cache, nbr, p, order).has_value();
}

bool respects_feasibility(UtilityCache& cache, const Partition& p)
{
	return std::all_of(p.coalitions().begin(), p.coalitions().end(),
	                   [&](const Coalition& c) { return cache.feasible(c); });
}

RunResult run_from(const GameSpec& game, const Neighborhood& nbr, PreferenceOrder order, Dynamics dynamics,
                   Partition initial, std::uint64_t seed, int max_iters)
{
	if (max_iters < 1)
	{
		throw std::invalid_argument("max_iters must be >= 1");
	}
	if (initial.n_players() != game.n_players || nbr.size() != static_cast<std::size_t>(game.n_players))
	{
		throw std::invalid_argument("run: player count mismatch between game, graph and partition");
	}
	UtilityCache cache(game);
	if (!respects_feasibility(cache, initial))
	{
		throw std::invalid_argument("run: initial partition has an infeasible coalition");
	}
	Rng rng(seed);
	SplitStats split_stats;
	auto next_step = [&](const Partition& p) -> std::optional<Step> {
		switch (dynamics)
		{
		case Dynamics::merge_split:
			if (auto s = merge_step(cache, p, order)) return s;
			if (auto s = split_step(cache, p, order, rng, &split_stats)) return s;
			// Merge/split rest points may still admit a single-player move.
			return switch_step(cache, nbr, p, order, rng);
		case Dynamics::switch_only:
			return switch_step(cache, nbr, p, order, rng);
		case Dynamics::switch_swap:
			if (auto s = switch_step(cache, nbr, p, order, rng)) return s;
			return swap_step(cache, p, order, rng);
		}
		return std::nullopt;
	};

	RunResult result{std::move(initial), {}};
	Trace& trace = result.trace;
	trace.initial_potential = cache.potential(result.partition);
	std::unordered_set<std::uint64_t> seen{result.partition.hash()};
	int applied = 0;
	while (true)
	{
		auto step = next_step(result.partition);
		if (!step)
		{
			trace.status = Status::stable;
			break;
		}
		if (applied == max_iters)
		{
			trace.status = Status::iteration_cap;
			break;
		}
		++applied;
		result.partition = std::move(step->partition);
		const std::uint64_t h = result.partition.hash();
		trace.entries.push_back(TraceEntry{applied, std::move(step->action), result.partition.canonical(), h,
		                                   cache.potential(result.partition)});
		if (!seen.insert(h).second)
		{
			trace.status = Status::cycle_detected;
			break;
		}
	}
	trace.sampled_split_coalitions = split_stats.sampled_coalitions;
	return result;
}

RunResult run_until_stable(const GameSpec& game, const Neighborhood& nbr, PreferenceOrder order, Dynamics dynamics,
                           std::uint64_t seed, int max_iters)
{
	return run_from(game, nbr, order, dynamics, Partition::singletons(game.n_players), seed, max_iters);
}

void write_trace_jsonl(const Trace& trace, std::ostream& out)
{
	for (const auto& e : trace.entries)
	{
		nlohmann::json line = {
		    {"iter", e.iter}, {"action", e.action}, {"partition", e.partition}, {"potential", e.potential}};
		out << line.dump() << '\n';
	}
}

} // namespace cagb::coalition
