#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace cagb::topology {

enum class NodeKind
{
	user,
	small_cell,
	macro_bs
};

std::string to_string(NodeKind kind);
NodeKind node_kind_from_string(const std::string& name);

struct Point
{
	double x = 0.0;
	double y = 0.0;
};

// Axis-aligned rectangle [0, width] x [0, height], meters.
struct Area
{
	double width = 0.0;
	double height = 0.0;

	bool contains(Point p) const
	{
		return p.x >= 0.0 && p.y >= 0.0 && p.x <= width && p.y <= height;
	}
};

struct Node
{
	int id = 0;
	NodeKind kind = NodeKind::user;
	Point pos;
};

/// Geometric graph of users and cells. Two distinct nodes are adjacent iff
/// their Euclidean distance is <= radius; edges are always derived from
/// positions and never stored independently of them.
class NetworkGraph
{
public:
	NetworkGraph() = default;
	NetworkGraph(Area area, double radius, std::vector<Node> nodes, std::uint64_t seed = 0);

	std::size_t size() const { return nodes_.size(); }
	const std::vector<Node>& nodes() const { return nodes_; }
	const Node& node(int id) const;
	Area area() const { return area_; }
	double radius() const { return radius_; }
	std::uint64_t seed() const { return seed_; }

	/// Sorted ids adjacent to `id`. Throws std::out_of_range for unknown ids.
	const std::vector<int>& neighbors(int id) const;
	bool adjacent(int a, int b) const;
	std::size_t edge_count() const;
	double mean_degree() const;

	friend bool operator==(const NetworkGraph& a, const NetworkGraph& b);

private:
	void check_id(int id) const;

	Area area_;
	double radius_ = 0.0;
	std::uint64_t seed_ = 0;
	std::vector<Node> nodes_;
	std::vector<std::vector<int>> adj_;
};

/// Poisson point process: N ~ Poisson(intensity * |area|), then N i.i.d.
/// uniform positions.
NetworkGraph generate_ppp(double intensity, Area area, double radius, NodeKind kind, std::uint64_t seed);

/// `count` i.i.d. uniform positions (the point process conditioned on its count).
NetworkGraph generate_uniform(std::size_t count, Area area, double radius, NodeKind kind, std::uint64_t seed);

/// Deterministic fixture. An empty `kinds` means all users; without an
/// explicit area the bounding rectangle [0, max x] x [0, max y] is used.
NetworkGraph generate_fixed(std::span<const Point> positions, double radius,
                            std::span<const NodeKind> kinds = {},
                            std::optional<Area> area = std::nullopt);

/// True iff the subgraph induced by `members` is connected. Throws on an
/// empty set or unknown ids.
bool coalition_feasible(const NetworkGraph& g, std::span<const int> members);

/// Shortest-path hop count between a and b using only nodes in `within`.
/// std::nullopt means unreachable.
std::optional<int> hop_distance(const NetworkGraph& g, int a, int b, std::span<const int> within);

/// Hop counts from `source` to every member of `within` (same order);
/// unreachable members get -1.
std::vector<int> hop_distances_from(const NetworkGraph& g, int source, std::span<const int> within);

nlohmann::json to_json(const NetworkGraph& g);
NetworkGraph graph_from_json(const nlohmann::json& doc);

} // namespace cagb::topology
