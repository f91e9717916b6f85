#pragma once

#include <cagb/coalition_engine.hpp>
#include <cagb/cost_sharing.hpp>
#include <cagb/topology.hpp>

#include <cstdint>
#include <map>
#include <vector>

namespace cagb::caching {

using coalition::Coalition;

/// Content id -> size in MB; ids are dense indices.
struct ContentCatalog
{
	std::vector<double> sizes;

	static ContentCatalog uniform(std::size_t count, double size_mb);
	std::size_t size() const { return sizes.size(); }
	double size_of(int content) const;
};

/// Player id -> sorted, distinct, nonempty content ids.
struct DemandProfile
{
	std::vector<std::vector<int>> demands;

	std::size_t players() const { return demands.size(); }
	const std::vector<int>& of(int player) const;
	void validate(const ContentCatalog& catalog) const;
};

struct CachingParams
{
	double c_bs = 1.0;    // per MB fetched from the macro base station
	double c_share = 0.1; // per MB per hop forwarded inside a coalition
	double popularity_skew = 0.8;

	void validate() const;
};

inline constexpr std::size_t kMonteCarloSamples = 4096;

/// c_bs times the total size of the union of the members' demands.
double coalition_download_cost(const Coalition& s, const DemandProfile& demands, const ContentCatalog& catalog,
                               const CachingParams& params);

double standalone_cost(int player, const DemandProfile& demands, const ContentCatalog& catalog,
                       const CachingParams& params);

/// Shapley division of coalition_download_cost. Exact up to
/// shapley::kMaxExactPlayers members, Monte Carlo with kMonteCarloSamples
/// orders (seeded from `seed` and the member set) beyond that.
shapley::Allocation download_shares(const Coalition& s, const DemandProfile& demands, const ContentCatalog& catalog,
                                    const CachingParams& params, std::uint64_t seed = 0);

/// Content id -> member that fetches it from the base station.
using DownloaderMap = std::map<int, int>;

/// Each content in the coalition's union goes to the requesting member with
/// the smallest total hop count to the other requesters; ties to lowest id.
DownloaderMap assign_downloaders(const Coalition& s, const topology::NetworkGraph& g, const DemandProfile& demands,
                                 const ContentCatalog& catalog, const CachingParams& params);

/// What member i pays to receive the contents it wants but does not fetch:
/// size * c_share * hops from the downloader, inside the coalition.
double sharing_cost(int player, const Coalition& s, const topology::NetworkGraph& g, const DemandProfile& demands,
                    const ContentCatalog& catalog, const CachingParams& params, const DownloaderMap& downloaders);

/// utility(i, S) = -(download share + sharing cost); feasible = connected.
coalition::GameSpec build_caching_game(const topology::NetworkGraph& g, const DemandProfile& demands,
                                       const ContentCatalog& catalog, const CachingParams& params,
                                       std::uint64_t seed = 0);

/// Zipf(skew)-weighted sampling of `per_player_count` distinct contents per
/// player (rank k has weight (k + 1)^-skew).
DemandProfile generate_demands(const topology::NetworkGraph& g, const ContentCatalog& catalog, double popularity_skew,
                               std::size_t per_player_count, std::uint64_t seed);

struct CostSummary
{
	double total = 0.0;
	double mean = 0.0;
};

/// Per-player costs are negated utilities.
CostSummary partition_cost(const coalition::GameSpec& game, const coalition::Partition& p);
CostSummary baseline_cost(const DemandProfile& demands, const ContentCatalog& catalog, const CachingParams& params);

} // namespace cagb::caching
