#include <cagb/auction.hpp>

#include <cagb/rng.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cagb::auction {

bool AuctionInstance::conflicts(int a, int b) const
{
	return conflict.at(static_cast<std::size_t>(a)).at(static_cast<std::size_t>(b)) != 0;
}

bool AuctionInstance::conflict_free(const std::vector<int>& group) const
{
	for (std::size_t i = 0; i < group.size(); ++i)
	{
		for (std::size_t j = i + 1; j < group.size(); ++j)
		{
			if (conflicts(group[i], group[j]))
			{
				return false;
			}
		}
	}
	return true;
}

void AuctionInstance::validate() const
{
	for (std::size_t c = 0; c < channels.size(); ++c)
	{
		if (channels[c].id != static_cast<int>(c) || !(channels[c].ask >= 0.0))
		{
			throw std::invalid_argument("channels need dense ids and asks >= 0");
		}
	}
	if (conflict.size() != buyers.size())
	{
		throw std::invalid_argument("conflict relation must be square over the buyers");
	}
	for (std::size_t b = 0; b < buyers.size(); ++b)
	{
		const Buyer& buyer = buyers[b];
		if (buyer.id != static_cast<int>(b))
		{
			throw std::invalid_argument("buyer ids must be dense 0..n-1");
		}
		if (buyer.valuations.size() != channels.size())
		{
			throw std::invalid_argument("buyer " + std::to_string(b) + " needs one valuation per channel");
		}
		for (double v : buyer.valuations)
		{
			if (!(v >= 0.0) || !std::isfinite(v))
			{
				throw std::invalid_argument("valuations must be finite and >= 0");
			}
		}
		if (buyer.demand < 1 || (!channels.empty() && buyer.demand > static_cast<int>(channels.size())))
		{
			throw std::invalid_argument("buyer demand must be in [1, channel count]");
		}
		if (conflict[b].size() != buyers.size() || conflict[b][b])
		{
			throw std::invalid_argument("conflict relation must be square and irreflexive");
		}
		for (std::size_t o = 0; o < buyers.size(); ++o)
		{
			if (conflict[b][o] != conflict[o][b])
			{
				throw std::invalid_argument("conflict relation must be symmetric");
			}
		}
	}
}

void validate_grouping(const BuyerGrouping& grouping, const AuctionInstance& instance)
{
	std::vector<int> uses(instance.buyers.size(), 0);
	for (const auto& [channel, group] : grouping)
	{
		if (channel < 0 || static_cast<std::size_t>(channel) >= instance.channels.size())
		{
			throw std::invalid_argument("grouping names unknown channel " + std::to_string(channel));
		}
		if (!instance.conflict_free(group))
		{
			throw std::invalid_argument("group on channel " + std::to_string(channel) + " has conflicting buyers");
		}
		for (int b : group)
		{
			if (++uses.at(static_cast<std::size_t>(b)) > instance.buyers[static_cast<std::size_t>(b)].demand)
			{
				throw std::invalid_argument("buyer " + std::to_string(b) + " is grouped beyond its demand");
			}
		}
	}
}

double group_bid(const std::vector<int>& group, int channel, const AuctionInstance& instance)
{
	if (!instance.conflict_free(group))
	{
		throw std::invalid_argument("group_bid: conflicting buyers cannot share a channel");
	}
	double bid = 0.0;
	for (int b : group)
	{
		bid += instance.buyers.at(static_cast<std::size_t>(b)).valuations.at(static_cast<std::size_t>(channel));
	}
	return bid;
}

namespace {

std::vector<int> channels_by_ask(const AuctionInstance& instance)
{
	std::vector<int> order(instance.channels.size());
	std::iota(order.begin(), order.end(), 0);
	std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
		return instance.channels[static_cast<std::size_t>(a)].ask < instance.channels[static_cast<std::size_t>(b)].ask;
	});
	return order;
}

double value_of(const AuctionInstance& instance, int buyer, int channel)
{
	return instance.buyers[static_cast<std::size_t>(buyer)].valuations[static_cast<std::size_t>(channel)];
}

} // namespace

AuctionOutcome double_auction_clear(const BuyerGrouping& grouping, const AuctionInstance& instance)
{
	validate_grouping(grouping, instance);
	AuctionOutcome out;
	std::vector<int> won(instance.buyers.size(), 0);
	for (int c : channels_by_ask(instance))
	{
		const auto it = grouping.find(c);
		if (it == grouping.end() || it->second.empty())
		{
			continue;
		}
		const double ask = instance.channels[static_cast<std::size_t>(c)].ask;
		const double bid = group_bid(it->second, c, instance);
		if (bid >= ask)
		{
			out.trades.push_back(Trade{c, it->second, ask, bid, 0.5 * (ask + bid)});
			out.revenue += out.trades.back().price;
			for (int b : it->second)
			{
				++won[static_cast<std::size_t>(b)];
			}
		}
	}
	if (!instance.channels.empty())
	{
		out.selling_ratio = static_cast<double>(out.trades.size()) / static_cast<double>(instance.channels.size());
	}
	if (!instance.buyers.empty())
	{
		double sum = 0.0;
		for (std::size_t b = 0; b < instance.buyers.size(); ++b)
		{
			sum += static_cast<double>(won[b]) / instance.buyers[b].demand;
		}
		out.satisfaction = sum / static_cast<double>(instance.buyers.size());
	}
	return out;
}

double member_utility(double value, double bid, double ask)
{
	if (bid >= ask)
	{
		const double surplus = bid > 0.0 ? value * (bid - ask) / (2.0 * bid) : 0.0;
		return value + surplus;
	}
	return value * bid / ask;
}

namespace {

// Drops the lowest-valuation members while the rest still meet the ask.
std::vector<int> trim_group(std::vector<int> group, int channel, double ask, const AuctionInstance& instance)
{
	std::vector<int> by_value = group;
	std::stable_sort(by_value.begin(), by_value.end(),
	                 [&](int a, int b) { return value_of(instance, a, channel) < value_of(instance, b, channel); });
	double bid = group_bid(group, channel, instance);
	for (int b : by_value)
	{
		const double v = value_of(instance, b, channel);
		if (group.size() > 1 && bid - v >= ask)
		{
			bid -= v;
			group.erase(std::find(group.begin(), group.end(), b));
		}
	}
	return group;
}

std::vector<int> form_channel_group(const AuctionInstance& instance, int channel, const std::vector<int>& capacity,
                                    const std::vector<int>& previous, coalition::PreferenceOrder order,
                                    std::uint64_t seed, int max_iters)
{
	using coalition::Coalition;
	const double ask = instance.channels[static_cast<std::size_t>(channel)].ask;
	std::vector<int> eligible;
	for (std::size_t b = 0; b < instance.buyers.size(); ++b)
	{
		if (capacity[b] > 0 && value_of(instance, static_cast<int>(b), channel) > 0.0)
		{
			eligible.push_back(static_cast<int>(b));
		}
	}
	if (eligible.empty())
	{
		return {};
	}
	const auto global = [&eligible](const Coalition& c) {
		std::vector<int> ids;
		for (int k : c.members)
		{
			ids.push_back(eligible[static_cast<std::size_t>(k)]);
		}
		return ids;
	};

	coalition::GameSpec game;
	game.n_players = static_cast<int>(eligible.size());
	game.feasible = [&](const Coalition& c) { return instance.conflict_free(global(c)); };
	game.utilities = [&](const Coalition& c) {
		const auto ids = global(c);
		double bid = 0.0;
		for (int b : ids)
		{
			bid += value_of(instance, b, channel);
		}
		std::vector<double> u;
		for (int b : ids)
		{
			u.push_back(member_utility(value_of(instance, b, channel), bid, ask));
		}
		return u;
	};
	std::vector<std::vector<int>> adj(eligible.size());
	for (std::size_t i = 0; i < eligible.size(); ++i)
	{
		for (std::size_t j = 0; j < eligible.size(); ++j)
		{
			if (i != j && !instance.conflicts(eligible[i], eligible[j]))
			{
				adj[i].push_back(static_cast<int>(j));
			}
		}
	}

	// Seed the run with last round's group for this channel, where still eligible.
	std::vector<int> labels(eligible.size());
	std::vector<int> kept;
	for (std::size_t i = 0; i < eligible.size(); ++i)
	{
		if (std::find(previous.begin(), previous.end(), eligible[i]) != previous.end())
		{
			kept.push_back(static_cast<int>(i));
		}
	}
	std::vector<std::vector<int>> groups;
	if (!kept.empty())
	{
		groups.push_back(kept);
	}
	for (std::size_t i = 0; i < eligible.size(); ++i)
	{
		if (std::find(kept.begin(), kept.end(), static_cast<int>(i)) == kept.end())
		{
			groups.push_back({static_cast<int>(i)});
		}
	}
	auto initial = coalition::Partition::from_groups(game.n_players, std::move(groups));
	const auto run = coalition::run_from(game, coalition::Neighborhood(std::move(adj)), order,
	                                     coalition::Dynamics::switch_only, std::move(initial), seed, max_iters);

	std::vector<int> best;
	for (const auto& c : run.partition.coalitions())
	{
		const auto ids = global(c);
		if (group_bid(ids, channel, instance) < ask)
		{
			continue;
		}
		auto trimmed = trim_group(ids, channel, ask, instance);
		const auto better = [&] {
			if (best.empty() || trimmed.size() != best.size())
			{
				return best.empty() || trimmed.size() < best.size();
			}
			return group_bid(trimmed, channel, instance) < group_bid(best, channel, instance);
		};
		if (better())
		{
			best = std::move(trimmed);
		}
	}
	return best;
}

} // namespace

FormationResult form_buyer_groups(const AuctionInstance& instance, coalition::PreferenceOrder order,
                                  std::uint64_t seed, int max_iters)
{
	if (order != coalition::PreferenceOrder::pareto)
	{
		throw std::invalid_argument("form_buyer_groups: buyer groups form under the Pareto order");
	}
	if (max_iters < 1)
	{
		throw std::invalid_argument("form_buyer_groups: max_iters must be >= 1");
	}
	instance.validate();
	constexpr int kMaxRounds = 16;
	FormationResult out;
	for (int round = 1; round <= kMaxRounds; ++round)
	{
		std::vector<int> capacity;
		for (const Buyer& b : instance.buyers)
		{
			capacity.push_back(b.demand);
		}
		BuyerGrouping next;
		const std::uint64_t round_seed = derive_seed(seed, static_cast<std::uint64_t>(round));
		for (int c : channels_by_ask(instance))
		{
			const auto prev_it = out.grouping.find(c);
			const std::vector<int> previous = prev_it == out.grouping.end() ? std::vector<int>{} : prev_it->second;
			auto group = form_channel_group(instance, c, capacity, previous, order,
			                                derive_seed(round_seed, static_cast<std::uint64_t>(c)), max_iters);
			if (group.empty())
			{
				continue;
			}
			for (int b : group)
			{
				--capacity[static_cast<std::size_t>(b)];
			}
			next.emplace(c, std::move(group));
		}
		out.rounds = round;
		if (round > 1 && next == out.grouping)
		{
			out.converged = true;
			break;
		}
		out.grouping = std::move(next);
	}
	return out;
}

BuyerGrouping no_grouping(const AuctionInstance& instance)
{
	instance.validate();
	std::vector<int> capacity;
	for (const Buyer& b : instance.buyers)
	{
		capacity.push_back(b.demand);
	}
	BuyerGrouping out;
	for (int c : channels_by_ask(instance))
	{
		int best = -1;
		for (std::size_t b = 0; b < instance.buyers.size(); ++b)
		{
			if (capacity[b] > 0 && (best < 0 || value_of(instance, static_cast<int>(b), c) > value_of(instance, best, c)))
			{
				best = static_cast<int>(b);
			}
		}
		if (best >= 0 && value_of(instance, best, c) >= instance.channels[static_cast<std::size_t>(c)].ask)
		{
			--capacity[static_cast<std::size_t>(best)];
			out.emplace(c, std::vector<int>{best});
		}
	}
	return out;
}

BuyerGrouping random_grouping(const AuctionInstance& instance, std::size_t max_group_size, std::uint64_t seed)
{
	instance.validate();
	max_group_size = std::max<std::size_t>(max_group_size, 1);
	Rng rng(seed);
	std::vector<int> capacity;
	for (const Buyer& b : instance.buyers)
	{
		capacity.push_back(b.demand);
	}
	BuyerGrouping out;
	for (int c : channels_by_ask(instance))
	{
		std::vector<int> pool;
		for (std::size_t b = 0; b < instance.buyers.size(); ++b)
		{
			if (capacity[b] > 0 && value_of(instance, static_cast<int>(b), c) > 0.0)
			{
				pool.push_back(static_cast<int>(b));
			}
		}
		shuffle(std::span<int>(pool), rng);
		const std::size_t target = 1 + uniform_index(rng, max_group_size);
		std::vector<int> group;
		for (int b : pool)
		{
			if (group.size() == target)
			{
				break;
			}
			group.push_back(b);
			if (!instance.conflict_free(group))
			{
				group.pop_back();
			}
		}
		std::sort(group.begin(), group.end());
		if (!group.empty() && group_bid(group, c, instance) >= instance.channels[static_cast<std::size_t>(c)].ask)
		{
			for (int b : group)
			{
				--capacity[static_cast<std::size_t>(b)];
			}
			out.emplace(c, std::move(group));
		}
	}
	return out;
}

AuctionInstance generate_instance(const AuctionParams& params, int n_buyers, std::uint64_t seed)
{
	if (params.n_channels < 0 || n_buyers < 0)
	{
		throw std::invalid_argument("channel and buyer counts must be >= 0");
	}
	if (params.ask_lo > params.ask_hi || params.ask_lo < 0.0 || params.valuation_lo > params.valuation_hi
	    || params.valuation_lo < 0.0)
	{
		throw std::invalid_argument("ask and valuation ranges must be ordered and non-negative");
	}
	if (params.demand_max < 1)
	{
		throw std::invalid_argument("demand_max must be >= 1");
	}
	const auto placement = topology::generate_uniform(static_cast<std::size_t>(n_buyers), params.area,
	                                                  params.interference_radius, topology::NodeKind::user,
	                                                  derive_seed(seed, 1));
	Rng rng(derive_seed(seed, 2));
	AuctionInstance inst;
	for (int c = 0; c < params.n_channels; ++c)
	{
		inst.channels.push_back(Channel{c, params.ask_lo + uniform01(rng) * (params.ask_hi - params.ask_lo)});
	}
	const int demand_cap = std::max(1, std::min(params.demand_max, params.n_channels));
	for (int b = 0; b < n_buyers; ++b)
	{
		Buyer buyer;
		buyer.id = b;
		for (int c = 0; c < params.n_channels; ++c)
		{
			buyer.valuations.push_back(params.valuation_lo
			                           + uniform01(rng) * (params.valuation_hi - params.valuation_lo));
		}
		buyer.demand = 1 + static_cast<int>(uniform_index(rng, static_cast<std::size_t>(demand_cap)));
		inst.buyers.push_back(std::move(buyer));
	}
	inst.conflict.assign(static_cast<std::size_t>(n_buyers), std::vector<char>(static_cast<std::size_t>(n_buyers), 0));
	for (int b = 0; b < n_buyers; ++b)
	{
		for (int o : placement.neighbors(b))
		{
			inst.conflict[static_cast<std::size_t>(b)][static_cast<std::size_t>(o)] = 1;
		}
	}
	return inst;
}

std::vector<AuctionRow> run_auction_cell(const AuctionParams& params, int n_buyers, std::uint64_t seed)
{
	const std::uint64_t cell_seed = derive_seed(seed, static_cast<std::uint64_t>(n_buyers));
	const auto instance = generate_instance(params, n_buyers, cell_seed);
	const auto cagb = form_buyer_groups(instance, coalition::PreferenceOrder::pareto, derive_seed(cell_seed, 3),
	                                    params.max_iters);
	std::size_t largest = 1;
	for (const auto& [c, g] : cagb.grouping)
	{
		largest = std::max(largest, g.size());
	}
	std::vector<AuctionRow> rows;
	rows.push_back(AuctionRow{"cagb", n_buyers, seed, double_auction_clear(cagb.grouping, instance)});
	rows.push_back(AuctionRow{"random", n_buyers, seed,
	                          double_auction_clear(random_grouping(instance, largest, derive_seed(cell_seed, 4)),
	                                               instance)});
	rows.push_back(AuctionRow{"no-grouping", n_buyers, seed, double_auction_clear(no_grouping(instance), instance)});
	return rows;
}

} // namespace cagb::auction
