#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cagb::coalition {

/// Sorted player ids. Only a Move destination may be empty (meaning a new
/// singleton); coalitions inside a Partition are always nonempty.
struct Coalition
{
	std::vector<int> members;

	bool empty() const { return members.empty(); }
	std::size_t size() const { return members.size(); }
	bool contains(int player) const;
	int least() const { return members.front(); }

	Coalition with(int player) const;
	Coalition without(int player) const;
	static Coalition unite(const Coalition& a, const Coalition& b);

	std::string to_string() const;

	friend bool operator==(const Coalition&, const Coalition&) = default;
	friend auto operator<=>(const Coalition&, const Coalition&) = default;
};

/// Disjoint cover of players 0..n-1 kept in canonical form: members sorted,
/// coalitions ordered by least member. Equal partitions compare equal.
class Partition
{
public:
	Partition() = default;

	static Partition singletons(int n_players);
	static Partition grand(int n_players);
	/// Validates disjointness and coverage, then canonicalizes.
	static Partition from_groups(int n_players, std::vector<std::vector<int>> groups);
	/// Restricted-growth string: labels[i] is the block of player i.
	static Partition from_labels(const std::vector<int>& labels);

	int n_players() const { return n_players_; }
	const std::vector<Coalition>& coalitions() const { return coalitions_; }
	std::size_t size() const { return coalitions_.size(); }
	std::size_t index_of(int player) const;
	const Coalition& coalition_of(int player) const { return coalitions_[index_of(player)]; }
	std::size_t max_coalition_size() const;

	/// Moves `player` into coalition `dest` (index into coalitions()), or into
	/// a new singleton when dest == npos.
	Partition moved(int player, std::size_t dest) const;
	Partition merged(std::size_t a, std::size_t b) const;
	Partition split(std::size_t index, const Coalition& part_a, const Coalition& part_b) const;
	/// Exchanges two players that sit in different coalitions.
	Partition swapped(int a, int b) const;

	/// e.g. "{0,2}{1}{3,4}"
	std::string canonical() const;
	/// FNV-1a over canonical().
	std::uint64_t hash() const;

	friend bool operator==(const Partition& a, const Partition& b)
	{
		return a.n_players_ == b.n_players_ && a.coalitions_ == b.coalitions_;
	}
	friend bool operator<(const Partition& a, const Partition& b)
	{
		return a.coalitions_ < b.coalitions_;
	}

	static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
	Partition(int n_players, std::vector<Coalition> coalitions);
	void canonicalize();

	int n_players_ = 0;
	std::vector<Coalition> coalitions_;
	std::vector<std::size_t> owner_;
};

} // namespace cagb::coalition
