#pragma once

#include <cagb/partition.hpp>
#include <cagb/rng.hpp>
#include <cagb/topology.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace cagb::coalition {

enum class PreferenceOrder
{
	pareto,
	coalition,
	selfish
};

enum class Dynamics
{
	merge_split,
	switch_only,
	switch_swap
};

enum class Verdict
{
	approved,
	rejected,
	infeasible
};

enum class Status
{
	stable,
	cycle_detected,
	iteration_cap
};

std::string to_string(PreferenceOrder order);
std::string to_string(Dynamics dynamics);
std::string to_string(Status status);
PreferenceOrder preference_order_from_string(const std::string& name);
Dynamics dynamics_from_string(const std::string& name);

// Comparisons: the driving player must gain more than this; everybody else
// may lose at most this much.
inline constexpr double kUtilityTolerance = 1e-9;

/// Abstract cooperative game. Utilities depend only on the player's own
/// coalition. Oracles must be pure: runs call them concurrently.
struct GameSpec
{
	int n_players = 0;
	/// Utility of every member of a (feasible) coalition, aligned with members.
	std::function<std::vector<double>(const Coalition&)> utilities;
	std::function<bool(const Coalition&)> feasible;

	double utility(int player, const Coalition& c) const;
};

/// Interaction graph used to generate switch candidates: a player may only
/// join coalitions that contain one of its neighbors.
class Neighborhood
{
public:
	Neighborhood() = default;
	explicit Neighborhood(std::vector<std::vector<int>> adjacency);
	static Neighborhood from_graph(const topology::NetworkGraph& g);
	static Neighborhood complete(int n_players);

	std::size_t size() const { return adj_.size(); }
	const std::vector<int>& neighbors(int player) const { return adj_.at(static_cast<std::size_t>(player)); }

private:
	std::vector<std::vector<int>> adj_;
};

/// Per-run memo of oracle results keyed by coalition.
class UtilityCache
{
public:
	explicit UtilityCache(const GameSpec& game) : game_(&game) {}

	const GameSpec& game() const { return *game_; }
	const std::vector<double>& utilities(const Coalition& c);
	double utility(int player, const Coalition& c);
	/// Sum of member utilities; 0 for the empty coalition.
	double total(const Coalition& c);
	/// Singletons and the empty coalition are always feasible.
	bool feasible(const Coalition& c);
	double potential(const Partition& p);

	std::size_t evaluations() const { return values_.size(); }

private:
	struct KeyHash
	{
		std::size_t operator()(const std::vector<int>& key) const;
	};

	const GameSpec* game_;
	std::unordered_map<std::vector<int>, std::vector<double>, KeyHash> values_;
	std::unordered_map<std::vector<int>, bool, KeyHash> feasible_;
};

/// A single player leaving `origin` for `destination` (empty = new singleton).
struct Move
{
	int mover = 0;
	Coalition origin;
	Coalition destination;

	std::string to_string() const;
};

Verdict approves(PreferenceOrder order, UtilityCache& cache, const Move& move);
Verdict approves(PreferenceOrder order, const GameSpec& game, const Move& move);

/// Order test for replacing coalitions `before` by `after` when no single
/// mover drives the change (merge and split). Selfish falls back to Pareto.
bool approves_regrouping(PreferenceOrder order, UtilityCache& cache, const std::vector<Coalition>& before,
                         const std::vector<Coalition>& after);

struct Step
{
	Partition partition;
	std::string action;
};

inline constexpr std::size_t kSplitEnumerationCap = 12;
inline constexpr std::size_t kSplitSampleCount = 2048;

struct SplitStats
{
	std::size_t sampled_coalitions = 0;
};

std::optional<Step> merge_step(UtilityCache& cache, const Partition& p, PreferenceOrder order);
std::optional<Step> split_step(UtilityCache& cache, const Partition& p, PreferenceOrder order, Rng& rng,
                               SplitStats* stats = nullptr);
/// Players are tried in a seeded random order and destinations in a seeded
/// random order; the first approved move is applied. No-change means no
/// player has an approved move.
std::optional<Step> switch_step(UtilityCache& cache, const Neighborhood& nbr, const Partition& p,
                                PreferenceOrder order, Rng& rng);
/// One-to-one exchange as leave-then-join; both phases must be approved.
std::optional<Step> swap_step(UtilityCache& cache, const Partition& p, PreferenceOrder order, Rng& rng);

struct TraceEntry
{
	int iter = 0;
	std::string action;
	std::string partition;
	std::uint64_t hash = 0;
	double potential = 0.0;
};

struct Trace
{
	std::vector<TraceEntry> entries;
	Status status = Status::stable;
	double initial_potential = 0.0;
	/// Coalitions above kSplitEnumerationCap whose bipartitions were sampled.
	std::size_t sampled_split_coalitions = 0;
};

struct RunResult
{
	Partition partition;
	Trace trace;
};

RunResult run_until_stable(const GameSpec& game, const Neighborhood& nbr, PreferenceOrder order, Dynamics dynamics,
                           std::uint64_t seed, int max_iters);
RunResult run_from(const GameSpec& game, const Neighborhood& nbr, PreferenceOrder order, Dynamics dynamics,
                   Partition initial, std::uint64_t seed, int max_iters);

/// Witness for instability: an approved single-player move, scanned
/// lowest-id-first. Moves that would break feasibility do not count.
std::optional<Move> find_approved_move(UtilityCache& cache, const Neighborhood& nbr, const Partition& p,
                                       PreferenceOrder order);
bool is_stable(const GameSpec& game, const Neighborhood& nbr, const Partition& p, PreferenceOrder order);

/// Coalitions of size >= 2 are all feasible.
bool respects_feasibility(UtilityCache& cache, const Partition& p);

struct StableSet
{
	std::vector<Partition> partitions; // sorted
	std::size_t scanned = 0;           // Bell(n)

	bool contains(const Partition& p) const;
};

inline constexpr int kMaxOraclePlayers = 10;

/// Brute force over every set partition; OpenMP-parallel scan.
StableSet enumerate_stable_partitions(const GameSpec& game, const Neighborhood& nbr, PreferenceOrder order);
/// Serial reference for the parallel scan.
StableSet enumerate_stable_partitions_serial(const GameSpec& game, const Neighborhood& nbr, PreferenceOrder order);

/// All set partitions of n players as restricted-growth strings, in
/// lexicographic order.
std::vector<std::vector<int>> restricted_growth_strings(int n);

void write_trace_jsonl(const Trace& trace, std::ostream& out);

} // namespace cagb::coalition
