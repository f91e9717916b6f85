#include <cagb/caching.hpp>

#include <cagb/rng.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace cagb::caching {

ContentCatalog ContentCatalog::uniform(std::size_t count, double size_mb)
{
	if (!(size_mb > 0.0))
	{
		throw std::invalid_argument("content size must be > 0");
	}
	return ContentCatalog{std::vector<double>(count, size_mb)};
}

double ContentCatalog::size_of(int content) const
{
	if (content < 0 || static_cast<std::size_t>(content) >= sizes.size())
	{
		throw std::out_of_range("unknown content id " + std::to_string(content));
	}
	return sizes[static_cast<std::size_t>(content)];
}

const std::vector<int>& DemandProfile::of(int player) const
{
	if (player < 0 || static_cast<std::size_t>(player) >= demands.size())
	{
		throw std::out_of_range("unknown player " + std::to_string(player));
	}
	return demands[static_cast<std::size_t>(player)];
}

void DemandProfile::validate(const ContentCatalog& catalog) const
{
	for (const double s : catalog.sizes)
	{
		if (!(s > 0.0))
		{
			throw std::invalid_argument("content sizes must be > 0");
		}
	}
	for (std::size_t p = 0; p < demands.size(); ++p)
	{
		const auto& d = demands[p];
		if (d.empty())
		{
			throw std::invalid_argument("player " + std::to_string(p) + " has an empty demand set");
		}
		if (!std::is_sorted(d.begin(), d.end()) || std::adjacent_find(d.begin(), d.end()) != d.end())
		{
			throw std::invalid_argument("player " + std::to_string(p) + " demands must be sorted and distinct");
		}
		for (int c : d)
		{
			catalog.size_of(c);
		}
	}
}

void CachingParams::validate() const
{
	if (!(c_bs > 0.0))
	{
		throw std::invalid_argument("c_bs must be > 0");
	}
	if (!(c_share >= 0.0))
	{
		throw std::invalid_argument("c_share must be >= 0");
	}
	if (!(popularity_skew >= 0.0))
	{
		throw std::invalid_argument("popularity_skew must be >= 0");
	}
}

namespace {

std::vector<int> demand_union(const Coalition& s, const DemandProfile& demands)
{
	std::vector<int> all;
	for (int p : s.members)
	{
		const auto& d = demands.of(p);
		all.insert(all.end(), d.begin(), d.end());
	}
	std::sort(all.begin(), all.end());
	all.erase(std::unique(all.begin(), all.end()), all.end());
	return all;
}

double union_cost(const std::vector<int>& players, const DemandProfile& demands, const ContentCatalog& catalog,
                  const CachingParams& params)
{
	double mb = 0.0;
	for (int c : demand_union(Coalition{players}, demands))
	{
		mb += catalog.size_of(c);
	}
	return params.c_bs * mb;
}

bool wants(const DemandProfile& demands, int player, int content)
{
	const auto& d = demands.of(player);
	return std::binary_search(d.begin(), d.end(), content);
}

// hops[a][b] between members (by position in s.members); -1 when unreachable.
std::vector<std::vector<int>> member_hops(const Coalition& s, const topology::NetworkGraph& g)
{
	std::vector<std::vector<int>> hops;
	hops.reserve(s.size());
	for (int m : s.members)
	{
		hops.push_back(topology::hop_distances_from(g, m, s.members));
	}
	return hops;
}

DownloaderMap assign_with_hops(const Coalition& s, const DemandProfile& demands,
                               const std::vector<std::vector<int>>& hops)
{
	DownloaderMap out;
	constexpr long long unreachable = std::numeric_limits<int>::max();
	for (int c : demand_union(s, demands))
	{
		std::vector<std::size_t> requesters;
		for (std::size_t k = 0; k < s.size(); ++k)
		{
			if (wants(demands, s.members[k], c))
			{
				requesters.push_back(k);
			}
		}
		std::size_t best = requesters.front();
		long long best_total = std::numeric_limits<long long>::max();
		for (std::size_t j : requesters)
		{
			long long total = 0;
			for (std::size_t k : requesters)
			{
				total += hops[j][k] < 0 ? unreachable : hops[j][k];
			}
			if (total < best_total) // members are sorted, so ties keep the lowest id
			{
				best_total = total;
				best = j;
			}
		}
		out.emplace(c, s.members[best]);
	}
	return out;
}

std::size_t member_position(const Coalition& s, int player)
{
	const auto it = std::lower_bound(s.members.begin(), s.members.end(), player);
	if (it == s.members.end() || *it != player)
	{
		throw std::invalid_argument("player " + std::to_string(player) + " is not in " + s.to_string());
	}
	return static_cast<std::size_t>(it - s.members.begin());
}

double sharing_with_hops(int player, const Coalition& s, const DemandProfile& demands, const ContentCatalog& catalog,
                         const CachingParams& params, const DownloaderMap& downloaders,
                         const std::vector<std::vector<int>>& hops)
{
	const std::size_t i = member_position(s, player);
	double cost = 0.0;
	for (int c : demands.of(player))
	{
		const auto it = downloaders.find(c);
		if (it == downloaders.end())
		{
			throw std::invalid_argument("content " + std::to_string(c) + " has no downloader");
		}
		if (it->second == player)
		{
			continue;
		}
		const int h = hops[member_position(s, it->second)][i];
		if (h < 0)
		{
			throw std::logic_error("sharing_cost: downloader unreachable inside " + s.to_string());
		}
		cost += catalog.size_of(c) * params.c_share * static_cast<double>(h);
	}
	return cost;
}

std::uint64_t coalition_seed(std::uint64_t seed, const Coalition& s)
{
	std::uint64_t h = seed;
	for (int m : s.members)
	{
		h = derive_seed(h, static_cast<std::uint64_t>(m));
	}
	return h;
}

} // namespace

double coalition_download_cost(const Coalition& s, const DemandProfile& demands, const ContentCatalog& catalog,
                               const CachingParams& params)
{
	if (s.empty())
	{
		throw std::invalid_argument("coalition_download_cost: empty coalition");
	}
	return union_cost(s.members, demands, catalog, params);
}

double standalone_cost(int player, const DemandProfile& demands, const ContentCatalog& catalog,
                       const CachingParams& params)
{
	return union_cost({player}, demands, catalog, params);
}

shapley::Allocation download_shares(const Coalition& s, const DemandProfile& demands, const ContentCatalog& catalog,
                                    const CachingParams& params, std::uint64_t seed)
{
	if (s.empty())
	{
		throw std::invalid_argument("download_shares: empty coalition");
	}
	shapley::TUGame game{s.members, [&](const std::vector<int>& subset) {
		                     return union_cost(subset, demands, catalog, params);
	                     }};
	if (s.size() <= shapley::kMaxExactPlayers)
	{
		return shapley::shapley_exact_serial(game);
	}
	return shapley::shapley_montecarlo_serial(game, kMonteCarloSamples, coalition_seed(seed, s));
}

DownloaderMap assign_downloaders(const Coalition& s, const topology::NetworkGraph& g, const DemandProfile& demands,
                                 const ContentCatalog&, const CachingParams&)
{
	return assign_with_hops(s, demands, member_hops(s, g));
}

double sharing_cost(int player, const Coalition& s, const topology::NetworkGraph& g, const DemandProfile& demands,
                    const ContentCatalog& catalog, const CachingParams& params, const DownloaderMap& downloaders)
{
	if (s.size() == 1)
	{
		member_position(s, player);
		return 0.0;
	}
	return sharing_with_hops(player, s, demands, catalog, params, downloaders, member_hops(s, g));
}

coalition::GameSpec build_caching_game(const topology::NetworkGraph& g, const DemandProfile& demands,
                                       const ContentCatalog& catalog, const CachingParams& params,
                                       std::uint64_t seed)
{
	params.validate();
	demands.validate(catalog);
	if (demands.players() != g.size())
	{
		throw std::invalid_argument("demand profile must cover exactly the graph's nodes");
	}
	struct Inputs
	{
		topology::NetworkGraph graph;
		DemandProfile demands;
		ContentCatalog catalog;
		CachingParams params;
		std::uint64_t seed;
	};
	auto in = std::make_shared<const Inputs>(Inputs{g, demands, catalog, params, seed});

	coalition::GameSpec game;
	game.n_players = static_cast<int>(g.size());
	game.feasible = [in](const Coalition& c) { return topology::coalition_feasible(in->graph, c.members); };
	game.utilities = [in](const Coalition& c) {
		const auto shares = download_shares(c, in->demands, in->catalog, in->params, in->seed);
		std::vector<double> u(c.size());
		if (c.size() == 1)
		{
			u[0] = -shares.shares[0];
			return u;
		}
		const auto hops = member_hops(c, in->graph);
		const auto downloaders = assign_with_hops(c, in->demands, hops);
		for (std::size_t k = 0; k < c.size(); ++k)
		{
			u[k] = -(shares.shares[k]
			         + sharing_with_hops(c.members[k], c, in->demands, in->catalog, in->params, downloaders, hops));
		}
		return u;
	};
	return game;
}

DemandProfile generate_demands(const topology::NetworkGraph& g, const ContentCatalog& catalog, double popularity_skew,
                               std::size_t per_player_count, std::uint64_t seed)
{
	if (per_player_count < 1 || per_player_count > catalog.size())
	{
		throw std::invalid_argument("per-player demand count must be in [1, catalog size]");
	}
	if (!(popularity_skew >= 0.0))
	{
		throw std::invalid_argument("popularity skew must be >= 0");
	}
	std::vector<double> weights(catalog.size());
	for (std::size_t k = 0; k < weights.size(); ++k)
	{
		weights[k] = std::pow(static_cast<double>(k + 1), -popularity_skew);
	}
	DemandProfile profile;
	profile.demands.resize(g.size());
	for (std::size_t p = 0; p < g.size(); ++p)
	{
		Rng rng(derive_seed(seed, p));
		std::vector<double> w = weights;
		auto& picks = profile.demands[p];
		for (std::size_t draw = 0; draw < per_player_count; ++draw)
		{
			double total = 0.0;
			for (double x : w)
			{
				total += x;
			}
			const double target = uniform01(rng) * total;
			double acc = 0.0;
			std::size_t chosen = w.size();
			for (std::size_t k = 0; k < w.size(); ++k)
			{
				if (w[k] <= 0.0)
				{
					continue;
				}
				acc += w[k];
				chosen = k;
				if (target < acc)
				{
					break;
				}
			}
			picks.push_back(static_cast<int>(chosen));
			w[chosen] = 0.0;
		}
		std::sort(picks.begin(), picks.end());
	}
	return profile;
}

CostSummary partition_cost(const coalition::GameSpec& game, const coalition::Partition& p)
{
	CostSummary out;
	for (const auto& c : p.coalitions())
	{
		for (double u : game.utilities(c))
		{
			out.total -= u;
		}
	}
	out.mean = p.n_players() ? out.total / p.n_players() : 0.0;
	return out;
}

CostSummary baseline_cost(const DemandProfile& demands, const ContentCatalog& catalog, const CachingParams& params)
{
	CostSummary out;
	for (std::size_t p = 0; p < demands.players(); ++p)
	{
		out.total += standalone_cost(static_cast<int>(p), demands, catalog, params);
	}
	out.mean = demands.players() ? out.total / static_cast<double>(demands.players()) : 0.0;
	return out;
}

} // namespace cagb::caching
