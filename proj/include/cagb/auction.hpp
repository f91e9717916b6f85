#pragma once

#include <cagb/coalition_engine.hpp>
#include <cagb/topology.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cagb::auction {

struct Channel
{
	int id = 0;
	double ask = 0.0;
};

struct Buyer
{
	int id = 0;
	std::vector<double> valuations; // per channel id
	int demand = 1;                 // distinct channels wanted
};

/// Sellers' channels, buyers, and the symmetric interference relation among
/// buyers (true = the two cannot reuse the same channel).
struct AuctionInstance
{
	std::vector<Channel> channels;
	std::vector<Buyer> buyers;
	std::vector<std::vector<char>> conflict;

	bool conflicts(int a, int b) const;
	bool conflict_free(const std::vector<int>& group) const;
	void validate() const;
};

/// Channel id -> buyer group. A buyer may sit in several channel groups.
using BuyerGrouping = std::map<int, std::vector<int>>;

/// Throws if a group has conflicting members or a buyer exceeds its demand.
void validate_grouping(const BuyerGrouping& grouping, const AuctionInstance& instance);

struct Trade
{
	int channel = 0;
	std::vector<int> group;
	double ask = 0.0;
	double bid = 0.0;
	double price = 0.0;
};

struct AuctionOutcome
{
	std::vector<Trade> trades;
	double selling_ratio = 0.0;
	double satisfaction = 0.0; // mean of channels won / demand
	double revenue = 0.0;      // sum of clearing prices
};

/// Sum of member valuations for `channel`. Throws on a conflicting group.
double group_bid(const std::vector<int>& group, int channel, const AuctionInstance& instance);

/// Channels in ascending ask order; each sells to its group iff bid >= ask,
/// at the midpoint (ask + bid) / 2.
AuctionOutcome double_auction_clear(const BuyerGrouping& grouping, const AuctionInstance& instance);

/// Utility of a member valuing the channel at `value` inside a group bidding
/// `bid` against `ask`: value * min(1, bid / ask) while losing, plus the
/// member's net surplus value * (bid - ask) / (2 bid) once the group wins.
double member_utility(double value, double bid, double ask);

struct FormationResult
{
	BuyerGrouping grouping;
	int rounds = 0;
	bool converged = false;
};

/// CAGB buyer-group formation. Channels are visited cheapest first; for each
/// one, buyers with spare demand play a coalition game (switch dynamics under
/// `order`, conflict-free groups only) and the tightest winning group is
/// kept, trimmed of members whose valuation is not needed to meet the ask.
/// Rounds repeat, seeded with the previous round's groups, until the grouping
/// no longer changes.
FormationResult form_buyer_groups(const AuctionInstance& instance, coalition::PreferenceOrder order,
                                  std::uint64_t seed, int max_iters);

/// Each channel goes to the single highest-valuation buyer with spare demand
/// that can afford it.
BuyerGrouping no_grouping(const AuctionInstance& instance);

/// Greedy random conflict-free groups with sizes uniform on [1, max_group_size].
BuyerGrouping random_grouping(const AuctionInstance& instance, std::size_t max_group_size, std::uint64_t seed);

struct AuctionParams
{
	int n_channels = 20;
	double ask_lo = 4.0;
	double ask_hi = 12.0;
	double valuation_lo = 1.0;
	double valuation_hi = 6.0;
	int demand_max = 3;
	double interference_radius = 30.0;
	topology::Area area{100.0, 100.0};
	int max_iters = 10000;
};

AuctionInstance generate_instance(const AuctionParams& params, int n_buyers, std::uint64_t seed);

struct AuctionRow
{
	std::string algorithm; // cagb | random | no-grouping
	int n_buyers = 0;
	std::uint64_t seed = 0;
	AuctionOutcome outcome;
};

/// One (buyer count, seed) cell: CAGB, random grouping and no grouping on the
/// same instance.
std::vector<AuctionRow> run_auction_cell(const AuctionParams& params, int n_buyers, std::uint64_t seed);

} // namespace cagb::auction
