#include <cagb/topology.hpp>

#include <cagb/rng.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace cagb::topology {

std::string to_string(NodeKind kind)
{
	switch (kind)
	{
	case NodeKind::user: return "user";
	case NodeKind::small_cell: return "small-cell";
	case NodeKind::macro_bs: return "macro-bs";
	}
	return "user";
}

NodeKind node_kind_from_string(const std::string& name)
{
	if (name == "user") return NodeKind::user;
	if (name == "small-cell") return NodeKind::small_cell;
	if (name == "macro-bs") return NodeKind::macro_bs;
	throw std::invalid_argument("unknown node kind '" + name + "'");
}

NetworkGraph::NetworkGraph(Area area, double radius, std::vector<Node> nodes, std::uint64_t seed)
	: area_(area), radius_(radius), seed_(seed), nodes_(std::move(nodes))
{
	if (!(radius >= 0.0) || !std::isfinite(radius))
	{
		throw std::invalid_argument("radius must be finite and >= 0");
	}
	if (!(area.width >= 0.0) || !(area.height >= 0.0))
	{
		throw std::invalid_argument("area dimensions must be >= 0");
	}
	const std::size_t n = nodes_.size();
	for (std::size_t i = 0; i < n; ++i)
	{
		if (nodes_[i].id != static_cast<int>(i))
		{
			throw std::invalid_argument("node ids must be dense 0..n-1 in order");
		}
		if (!area_.contains(nodes_[i].pos))
		{
			throw std::invalid_argument("node " + std::to_string(i) + " lies outside the area");
		}
	}
	adj_.assign(n, {});
	const double r2 = radius_ * radius_;
	for (std::size_t i = 0; i < n; ++i)
	{
		for (std::size_t j = i + 1; j < n; ++j)
		{
			const double dx = nodes_[i].pos.x - nodes_[j].pos.x;
			const double dy = nodes_[i].pos.y - nodes_[j].pos.y;
			if (dx * dx + dy * dy <= r2)
			{
				adj_[i].push_back(static_cast<int>(j));
				adj_[j].push_back(static_cast<int>(i));
			}
		}
	}
	for (auto& row : adj_)
	{
		std::sort(row.begin(), row.end());
	}
}

void NetworkGraph::check_id(int id) const
{
	if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size())
	{
		throw std::out_of_range("unknown node id " + std::to_string(id));
	}
}

const Node& NetworkGraph::node(int id) const
{
	check_id(id);
	return nodes_[static_cast<std::size_t>(id)];
}

const std::vector<int>& NetworkGraph::neighbors(int id) const
{
	check_id(id);
	return adj_[static_cast<std::size_t>(id)];
}

bool NetworkGraph::adjacent(int a, int b) const
{
	const auto& row = neighbors(b);
	check_id(a);
	return std::binary_search(row.begin(), row.end(), a);
}

std::size_t NetworkGraph::edge_count() const
{
	std::size_t twice = 0;
	for (const auto& row : adj_)
	{
		twice += row.size();
	}
	return twice / 2;
}

double NetworkGraph::mean_degree() const
{
	return nodes_.empty() ? 0.0 : 2.0 * static_cast<double>(edge_count()) / static_cast<double>(nodes_.size());
}

bool operator==(const NetworkGraph& a, const NetworkGraph& b)
{
	if (a.nodes_.size() != b.nodes_.size() || a.radius_ != b.radius_ || a.area_.width != b.area_.width
	    || a.area_.height != b.area_.height)
	{
		return false;
	}
	for (std::size_t i = 0; i < a.nodes_.size(); ++i)
	{
		const Node& x = a.nodes_[i];
		const Node& y = b.nodes_[i];
		if (x.kind != y.kind || x.pos.x != y.pos.x || x.pos.y != y.pos.y)
		{
			return false;
		}
	}
	return a.adj_ == b.adj_;
}

namespace {

void check_generation_args(Area area, double radius)
{
	if (!(area.width > 0.0) || !(area.height > 0.0) || !std::isfinite(area.width) || !std::isfinite(area.height))
	{
		throw std::invalid_argument("area must have positive finite width and height");
	}
	if (!(radius >= 0.0) || !std::isfinite(radius))
	{
		throw std::invalid_argument("radius must be finite and >= 0");
	}
}

std::vector<Node> uniform_nodes(std::size_t count, Area area, NodeKind kind, Rng& rng)
{
	std::vector<Node> nodes(count);
	for (std::size_t i = 0; i < count; ++i)
	{
		nodes[i].id = static_cast<int>(i);
		nodes[i].kind = kind;
		nodes[i].pos.x = uniform01(rng) * area.width;
		nodes[i].pos.y = uniform01(rng) * area.height;
	}
	return nodes;
}

} // namespace

NetworkGraph generate_ppp(double intensity, Area area, double radius, NodeKind kind, std::uint64_t seed)
{
	if (!(intensity >= 0.0) || !std::isfinite(intensity))
	{
		throw std::invalid_argument("intensity must be finite and >= 0");
	}
	check_generation_args(area, radius);
	Rng rng(seed);
	const std::uint64_t count = poisson(rng, intensity * area.width * area.height);
	return NetworkGraph(area, radius, uniform_nodes(count, area, kind, rng), seed);
}

NetworkGraph generate_uniform(std::size_t count, Area area, double radius, NodeKind kind, std::uint64_t seed)
{
	check_generation_args(area, radius);
	Rng rng(seed);
	return NetworkGraph(area, radius, uniform_nodes(count, area, kind, rng), seed);
}

NetworkGraph generate_fixed(std::span<const Point> positions, double radius, std::span<const NodeKind> kinds,
                            std::optional<Area> area)
{
	if (!kinds.empty() && kinds.size() != positions.size())
	{
		throw std::invalid_argument("kind list length must match position count");
	}
	Area box;
	if (area)
	{
		box = *area;
	}
	else
	{
		for (const Point& p : positions)
		{
			if (p.x < 0.0 || p.y < 0.0)
			{
				throw std::invalid_argument("fixture positions must be non-negative without an explicit area");
			}
			box.width = std::max(box.width, p.x);
			box.height = std::max(box.height, p.y);
		}
	}
	std::vector<Node> nodes(positions.size());
	for (std::size_t i = 0; i < positions.size(); ++i)
	{
		nodes[i] = Node{static_cast<int>(i), kinds.empty() ? NodeKind::user : kinds[i], positions[i]};
	}
	return NetworkGraph(box, radius, std::move(nodes));
}

namespace {

// Marks members in a node-indexed mask; rejects unknown ids.
std::vector<char> member_mask(const NetworkGraph& g, std::span<const int> members)
{
	std::vector<char> in(g.size(), 0);
	for (int m : members)
	{
		if (m < 0 || static_cast<std::size_t>(m) >= g.size())
		{
			throw std::out_of_range("unknown node id " + std::to_string(m));
		}
		in[static_cast<std::size_t>(m)] = 1;
	}
	return in;
}

std::vector<int> bfs_within(const NetworkGraph& g, int source, const std::vector<char>& in)
{
	std::vector<int> dist(g.size(), -1);
	std::deque<int> queue{source};
	dist[static_cast<std::size_t>(source)] = 0;
	while (!queue.empty())
	{
		const int u = queue.front();
		queue.pop_front();
		for (int v : g.neighbors(u))
		{
			auto vi = static_cast<std::size_t>(v);
			if (in[vi] && dist[vi] < 0)
			{
				dist[vi] = dist[static_cast<std::size_t>(u)] + 1;
				queue.push_back(v);
			}
		}
	}
	return dist;
}

} // namespace

bool coalition_feasible(const NetworkGraph& g, std::span<const int> members)
{
	if (members.empty())
	{
		throw std::invalid_argument("coalition_feasible: empty member set");
	}
	const auto in = member_mask(g, members);
	if (members.size() == 1)
	{
		return true;
	}
	const auto dist = bfs_within(g, members.front(), in);
	return std::all_of(members.begin(), members.end(),
	                   [&](int m) { return dist[static_cast<std::size_t>(m)] >= 0; });
}

std::optional<int> hop_distance(const NetworkGraph& g, int a, int b, std::span<const int> within)
{
	const auto in = member_mask(g, within);
	g.neighbors(a);
	g.neighbors(b);
	if (!in[static_cast<std::size_t>(a)] || !in[static_cast<std::size_t>(b)])
	{
		throw std::invalid_argument("hop_distance: endpoints must belong to the member set");
	}
	if (a == b)
	{
		return 0;
	}
	const int d = bfs_within(g, a, in)[static_cast<std::size_t>(b)];
	if (d < 0)
	{
		return std::nullopt;
	}
	return d;
}

std::vector<int> hop_distances_from(const NetworkGraph& g, int source, std::span<const int> within)
{
	const auto in = member_mask(g, within);
	g.neighbors(source);
	if (!in[static_cast<std::size_t>(source)])
	{
		throw std::invalid_argument("hop_distances_from: source must belong to the member set");
	}
	const auto dist = bfs_within(g, source, in);
	std::vector<int> out;
	out.reserve(within.size());
	for (int m : within)
	{
		out.push_back(dist[static_cast<std::size_t>(m)]);
	}
	return out;
}

nlohmann::json to_json(const NetworkGraph& g)
{
	nlohmann::json nodes = nlohmann::json::array();
	for (const Node& n : g.nodes())
	{
		nodes.push_back({{"id", n.id}, {"kind", to_string(n.kind)}, {"pos", {n.pos.x, n.pos.y}}});
	}
	return {{"area", {g.area().width, g.area().height}}, {"radius", g.radius()}, {"nodes", nodes}};
}

NetworkGraph graph_from_json(const nlohmann::json& doc)
{
	const auto& area = doc.at("area");
	if (!area.is_array() || area.size() != 2)
	{
		throw std::invalid_argument("graph fixture: 'area' must be [width, height]");
	}
	Area box{area[0].get<double>(), area[1].get<double>()};
	std::vector<Node> nodes;
	for (const auto& item : doc.at("nodes"))
	{
		const auto& pos = item.at("pos");
		if (!pos.is_array() || pos.size() != 2)
		{
			throw std::invalid_argument("graph fixture: 'pos' must be [x, y]");
		}
		nodes.push_back(Node{item.at("id").get<int>(), node_kind_from_string(item.at("kind").get<std::string>()),
		                     Point{pos[0].get<double>(), pos[1].get<double>()}});
	}
	std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
	return NetworkGraph(box, doc.at("radius").get<double>(), std::move(nodes));
}

} // namespace cagb::topology
