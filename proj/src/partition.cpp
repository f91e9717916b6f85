#include <cagb/partition.hpp>

#include <algorithm>
#include <stdexcept>

namespace cagb::coalition {

bool Coalition::contains(int player) const
{
	return std::binary_search(members.begin(), members.end(), player);
}

Coalition Coalition::with(int player) const
{
	Coalition out = *this;
	out.members.insert(std::lower_bound(out.members.begin(), out.members.end(), player), player);
	return out;
}

Coalition Coalition::without(int player) const
{
	Coalition out = *this;
	auto it = std::lower_bound(out.members.begin(), out.members.end(), player);
	if (it != out.members.end() && *it == player)
	{
		out.members.erase(it);
	}
	return out;
}

Coalition Coalition::unite(const Coalition& a, const Coalition& b)
{
	Coalition out;
	out.members.reserve(a.size() + b.size());
	std::merge(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
	           std::back_inserter(out.members));
	return out;
}

std::string Coalition::to_string() const
{
	std::string s = "{";
	for (std::size_t i = 0; i < members.size(); ++i)
	{
		if (i)
		{
			s += ',';
		}
		s += std::to_string(members[i]);
	}
	return s + "}";
}

Partition::Partition(int n_players, std::vector<Coalition> coalitions)
	: n_players_(n_players), coalitions_(std::move(coalitions))
{
	canonicalize();
}

void Partition::canonicalize()
{
	coalitions_.erase(std::remove_if(coalitions_.begin(), coalitions_.end(),
	                                 [](const Coalition& c) { return c.empty(); }),
	                  coalitions_.end());
	for (auto& c : coalitions_)
	{
		std::sort(c.members.begin(), c.members.end());
	}
	std::sort(coalitions_.begin(), coalitions_.end(),
	          [](const Coalition& a, const Coalition& b) { return a.least() < b.least(); });
	owner_.assign(static_cast<std::size_t>(n_players_), npos);
	for (std::size_t k = 0; k < coalitions_.size(); ++k)
	{
		for (int p : coalitions_[k].members)
		{
			if (p < 0 || p >= n_players_)
			{
				throw std::invalid_argument("partition: player id " + std::to_string(p) + " out of range");
			}
			auto& slot = owner_[static_cast<std::size_t>(p)];
			if (slot != npos)
			{
				throw std::invalid_argument("partition: player " + std::to_string(p) + " appears twice");
			}
			slot = k;
		}
	}
	for (std::size_t p = 0; p < owner_.size(); ++p)
	{
		if (owner_[p] == npos)
		{
			throw std::invalid_argument("partition: player " + std::to_string(p) + " is not covered");
		}
	}
}

Partition Partition::singletons(int n_players)
{
	std::vector<Coalition> cs;
	for (int p = 0; p < n_players; ++p)
	{
		cs.push_back(Coalition{{p}});
	}
	return Partition(n_players, std::move(cs));
}

Partition Partition::grand(int n_players)
{
	Coalition all;
	for (int p = 0; p < n_players; ++p)
	{
		all.members.push_back(p);
	}
	return Partition(n_players, {all});
}

Partition Partition::from_groups(int n_players, std::vector<std::vector<int>> groups)
{
	std::vector<Coalition> cs;
	for (auto& g : groups)
	{
		if (g.empty())
		{
			throw std::invalid_argument("partition: empty coalition");
		}
		cs.push_back(Coalition{std::move(g)});
	}
	return Partition(n_players, std::move(cs));
}

Partition Partition::from_labels(const std::vector<int>& labels)
{
	int blocks = 0;
	for (int l : labels)
	{
		blocks = std::max(blocks, l + 1);
	}
	std::vector<Coalition> cs(static_cast<std::size_t>(blocks));
	for (std::size_t p = 0; p < labels.size(); ++p)
	{
		cs[static_cast<std::size_t>(labels[p])].members.push_back(static_cast<int>(p));
	}
	return Partition(static_cast<int>(labels.size()), std::move(cs));
}

std::size_t Partition::index_of(int player) const
{
	if (player < 0 || player >= n_players_)
	{
		throw std::out_of_range("partition: unknown player " + std::to_string(player));
	}
	return owner_[static_cast<std::size_t>(player)];
}

std::size_t Partition::max_coalition_size() const
{
	std::size_t m = 0;
	for (const auto& c : coalitions_)
	{
		m = std::max(m, c.size());
	}
	return m;
}

Partition Partition::moved(int player, std::size_t dest) const
{
	const std::size_t from = index_of(player);
	std::vector<Coalition> cs = coalitions_;
	cs[from] = cs[from].without(player);
	if (dest == npos)
	{
		cs.push_back(Coalition{{player}});
	}
	else
	{
		cs.at(dest) = cs.at(dest).with(player);
	}
	return Partition(n_players_, std::move(cs));
}

Partition Partition::merged(std::size_t a, std::size_t b) const
{
	if (a == b)
	{
		throw std::invalid_argument("partition: cannot merge a coalition with itself");
	}
	std::vector<Coalition> cs = coalitions_;
	cs.at(a) = Coalition::unite(cs.at(a), cs.at(b));
	cs.at(b).members.clear();
	return Partition(n_players_, std::move(cs));
}

Partition Partition::split(std::size_t index, const Coalition& part_a, const Coalition& part_b) const
{
	if (Coalition::unite(part_a, part_b) != coalitions_.at(index))
	{
		throw std::invalid_argument("partition: split parts do not cover the coalition");
	}
	std::vector<Coalition> cs = coalitions_;
	cs[index] = part_a;
	cs.push_back(part_b);
	return Partition(n_players_, std::move(cs));
}

Partition Partition::swapped(int a, int b) const
{
	const std::size_t ia = index_of(a);
	const std::size_t ib = index_of(b);
	if (ia == ib)
	{
		throw std::invalid_argument("partition: swap needs players in different coalitions");
	}
	std::vector<Coalition> cs = coalitions_;
	cs[ia] = cs[ia].without(a).with(b);
	cs[ib] = cs[ib].without(b).with(a);
	return Partition(n_players_, std::move(cs));
}

std::string Partition::canonical() const
{
	std::string s;
	for (const auto& c : coalitions_)
	{
		s += c.to_string();
	}
	return s;
}

std::uint64_t Partition::hash() const
{
	std::uint64_t h = 0xcbf29ce484222325ULL;
	for (unsigned char ch : canonical())
	{
		h ^= ch;
		h *= 0x100000001b3ULL;
	}
	return h;
}

} // namespace cagb::coalition
