#include <cagb/topology.hpp>

#include <doctest.h>

#include <algorithm>
#include <vector>

using namespace cagb::topology;

namespace {

NetworkGraph path_abc()
{
	const std::vector<Point> pts{{0, 0}, {1, 0}, {2, 0}};
	return generate_fixed(pts, 1.5);
}

// Hub 0 at the center, leaves 1 and 2 on opposite sides.
NetworkGraph star()
{
	const std::vector<Point> pts{{1, 1}, {0, 1}, {2, 1}};
	return generate_fixed(pts, 1.0);
}

} // namespace

TEST_CASE("generate_ppp with zero intensity yields no nodes")
{
	for (std::uint64_t seed : {0ULL, 1ULL, 99ULL})
	{
		const auto g = generate_ppp(0.0, Area{50, 80}, 10.0, NodeKind::user, seed);
		CHECK(g.size() == 0);
		CHECK(g.edge_count() == 0);
	}
}

TEST_CASE("generate_ppp node counts follow Poisson(intensity x area)")
{
	// Poisson(100): mean 100, variance 100.
	const int runs = 1000;
	double sum = 0.0;
	double sq = 0.0;
	for (int s = 0; s < runs; ++s)
	{
		const auto n = static_cast<double>(
		    generate_ppp(0.01, Area{100, 100}, 5.0, NodeKind::user, static_cast<std::uint64_t>(s)).size());
		sum += n;
		sq += n * n;
	}
	const double mean = sum / runs;
	const double var = (sq - runs * mean * mean) / (runs - 1);
	CHECK(mean >= 90.0);
	CHECK(mean <= 110.0);
	CHECK(var >= 80.0);
	CHECK(var <= 120.0);
}

TEST_CASE("generate_ppp is deterministic and validates arguments")
{
	const auto a = generate_ppp(0.02, Area{60, 40}, 8.0, NodeKind::small_cell, 1234);
	const auto b = generate_ppp(0.02, Area{60, 40}, 8.0, NodeKind::small_cell, 1234);
	CHECK(a == b);
	CHECK(a.seed() == 1234);
	for (const auto& n : a.nodes())
	{
		CHECK(a.area().contains(n.pos));
		CHECK(n.kind == NodeKind::small_cell);
	}
	CHECK_THROWS_AS(generate_ppp(-0.1, Area{10, 10}, 1.0, NodeKind::user, 1), std::invalid_argument);
	CHECK_THROWS_AS(generate_ppp(0.1, Area{10, 10}, -1.0, NodeKind::user, 1), std::invalid_argument);
	CHECK_THROWS_AS(generate_ppp(0.1, Area{0, 10}, 1.0, NodeKind::user, 1), std::invalid_argument);
}

TEST_CASE("zero radius leaves the edge set empty")
{
	const auto g = generate_ppp(0.05, Area{30, 30}, 0.0, NodeKind::user, 5);
	CHECK(g.size() > 0);
	CHECK(g.edge_count() == 0);
}

TEST_CASE("edges are symmetric, irreflexive and exactly the pairs within radius")
{
	const auto g = generate_ppp(0.03, Area{50, 50}, 9.0, NodeKind::user, 77);
	for (std::size_t i = 0; i < g.size(); ++i)
	{
		const int a = static_cast<int>(i);
		const auto& nb = g.neighbors(a);
		CHECK(std::find(nb.begin(), nb.end(), a) == nb.end());
		for (std::size_t j = 0; j < g.size(); ++j)
		{
			const int b = static_cast<int>(j);
			if (a == b)
			{
				continue;
			}
			const double dx = g.node(a).pos.x - g.node(b).pos.x;
			const double dy = g.node(a).pos.y - g.node(b).pos.y;
			CHECK(g.adjacent(a, b) == g.adjacent(b, a));
			CHECK(g.adjacent(a, b) == (dx * dx + dy * dy <= 81.0));
		}
	}
}

TEST_CASE("generate_fixed builds the given nodes")
{
	const auto g = path_abc();
	CHECK(g.size() == 3);
	CHECK(g.edge_count() == 2);
	CHECK(g.adjacent(0, 1));
	CHECK(g.adjacent(1, 2));
	CHECK_FALSE(g.adjacent(0, 2));

	CHECK(generate_fixed(std::vector<Point>{}, 1.0).size() == 0);

	const std::vector<Point> dup{{0, 0}, {0, 0}};
	const auto d = generate_fixed(dup, 1.0);
	CHECK(d.size() == 2);
	CHECK(d.edge_count() == 1);

	const std::vector<Point> outside{{5, 5}};
	CHECK_THROWS_AS(generate_fixed(outside, 1.0, {}, Area{2, 2}), std::invalid_argument);
	const std::vector<Point> negative{{-1, 0}};
	CHECK_THROWS_AS(generate_fixed(negative, 1.0), std::invalid_argument);
}

TEST_CASE("neighbors")
{
	const auto p = path_abc();
	CHECK(p.neighbors(1) == std::vector<int>{0, 2});

	const std::vector<Point> lone{{0, 0}, {10, 10}};
	CHECK(generate_fixed(lone, 1.0).neighbors(0).empty());

	const std::vector<Point> tri{{0, 0}, {1, 0}, {0, 1}};
	CHECK(generate_fixed(tri, 2.0).neighbors(0) == std::vector<int>{1, 2});

	CHECK_THROWS_AS(p.neighbors(3), std::out_of_range);
	CHECK_THROWS_AS(p.neighbors(-1), std::out_of_range);
}

TEST_CASE("coalition_feasible is connectivity of the induced subgraph")
{
	const auto p = path_abc();
	for (int i = 0; i < 3; ++i)
	{
		CHECK(coalition_feasible(p, std::vector<int>{i}));
	}
	CHECK_FALSE(coalition_feasible(p, std::vector<int>{0, 2}));
	CHECK(coalition_feasible(p, std::vector<int>{0, 1, 2}));

	const auto s = star();
	CHECK_FALSE(coalition_feasible(s, std::vector<int>{1, 2}));
	CHECK(coalition_feasible(s, std::vector<int>{0, 1, 2}));

	CHECK_THROWS_AS(coalition_feasible(p, std::vector<int>{}), std::invalid_argument);
	CHECK_THROWS_AS(coalition_feasible(p, std::vector<int>{0, 7}), std::out_of_range);
}

TEST_CASE("feasibility survives edge additions")
{
	// Same positions, larger radius: a superset of edges.
	for (std::uint64_t seed = 0; seed < 20; ++seed)
	{
		const auto small = generate_uniform(9, Area{40, 40}, 12.0, NodeKind::user, seed);
		const auto large = generate_uniform(9, Area{40, 40}, 20.0, NodeKind::user, seed);
		for (unsigned mask = 1; mask < (1u << 9); ++mask)
		{
			std::vector<int> members;
			for (int k = 0; k < 9; ++k)
			{
				if (mask >> k & 1u)
				{
					members.push_back(k);
				}
			}
			if (coalition_feasible(small, members))
			{
				CHECK(coalition_feasible(large, members));
			}
		}
	}
}

TEST_CASE("hop_distance inside a member set")
{
	const auto p = path_abc();
	const std::vector<int> all{0, 1, 2};
	CHECK(hop_distance(p, 1, 1, all) == 0);
	CHECK(hop_distance(p, 0, 2, all) == 2);
	CHECK_FALSE(hop_distance(p, 0, 2, std::vector<int>{0, 2}).has_value());
	CHECK(hop_distances_from(p, 0, all) == std::vector<int>{0, 1, 2});
	CHECK_THROWS_AS(hop_distance(p, 0, 2, std::vector<int>{0, 1}), std::invalid_argument);
}

TEST_CASE("hop_distance satisfies the triangle inequality")
{
	const auto g = generate_uniform(14, Area{50, 50}, 16.0, NodeKind::user, 31);
	std::vector<int> within{0, 1, 2, 3, 5, 7, 8, 9, 11, 13};
	for (int a : within)
	{
		for (int b : within)
		{
			for (int c : within)
			{
				const auto ab = hop_distance(g, a, b, within);
				const auto bc = hop_distance(g, b, c, within);
				const auto ac = hop_distance(g, a, c, within);
				if (ab && bc)
				{
					REQUIRE(ac.has_value());
					CHECK(*ac <= *ab + *bc);
				}
			}
		}
	}
}

TEST_CASE("graph fixtures round-trip through JSON without edges")
{
	const auto g = generate_ppp(0.02, Area{40, 30}, 7.5, NodeKind::user, 8);
	const auto doc = to_json(g);
	CHECK_FALSE(doc.contains("edges"));
	CHECK(doc.at("nodes").size() == g.size());
	const auto back = graph_from_json(nlohmann::json::parse(doc.dump()));
	CHECK(back == g);

	const auto fixture = nlohmann::json::parse(
	    R"({"area":[10,10],"radius":1.5,"nodes":[{"id":0,"kind":"user","pos":[0,0]},
	       {"id":1,"kind":"small-cell","pos":[1,0]},{"id":2,"kind":"macro-bs","pos":[2,0]}]})");
	const auto f = graph_from_json(fixture);
	CHECK(f.edge_count() == 2);
	CHECK(f.node(2).kind == NodeKind::macro_bs);
	CHECK_THROWS(graph_from_json(nlohmann::json::parse(R"({"area":[10,10],"radius":1,"nodes":[{"id":0,"kind":"x","pos":[0,0]}]})")));
}
