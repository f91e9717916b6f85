#include <cagb/caching.hpp>
#include <cagb/topology.hpp>

#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <set>

using namespace cagb;
using namespace cagb::caching;
using coalition::Partition;
using topology::Point;

namespace {

Coalition co(std::vector<int> m) { return Coalition{std::move(m)}; }

// A(0) - B(1) - C(2), spacing 10, radius 12.
topology::NetworkGraph path3()
{
	const std::vector<Point> pts{{0, 0}, {10, 0}, {20, 0}};
	return topology::generate_fixed(pts, 12.0);
}

// Hub 0 at the centre, leaves 1..4 around it (leaves 14.1+ apart).
topology::NetworkGraph star5()
{
	const std::vector<Point> pts{{10, 10}, {0, 10}, {20, 10}, {10, 0}, {10, 20}};
	return topology::generate_fixed(pts, 10.5);
}

// Independent closed form for the Shapley value of a union-cost game: every
// content's cost is split evenly among the members that request it.
std::map<int, double> union_shapley(const Coalition& s, const DemandProfile& d, const ContentCatalog& cat,
                                    double c_bs)
{
	std::map<int, int> requesters;
	for (int p : s.members)
	{
		for (int f : d.demands[std::size_t(p)])
		{
			++requesters[f];
		}
	}
	std::map<int, double> out;
	for (int p : s.members)
	{
		double share = 0.0;
		for (int f : d.demands[std::size_t(p)])
		{
			share += c_bs * cat.sizes[std::size_t(f)] / requesters[f];
		}
		out[p] = share;
	}
	return out;
}

// All-pairs hop counts inside the coalition (Floyd-Warshall oracle).
std::map<std::pair<int, int>, int> hops_within(const topology::NetworkGraph& g, const Coalition& s)
{
	constexpr int inf = std::numeric_limits<int>::max() / 4;
	std::map<std::pair<int, int>, int> d;
	for (int a : s.members)
	{
		for (int b : s.members)
		{
			d[{a, b}] = a == b ? 0 : (g.adjacent(a, b) ? 1 : inf);
		}
	}
	for (int k : s.members)
	{
		for (int a : s.members)
		{
			for (int b : s.members)
			{
				d[{a, b}] = std::min(d[{a, b}], d[{a, k}] + d[{k, b}]);
			}
		}
	}
	return d;
}

// Independent utility oracle for build_caching_game on coalitions up to 10.
double utility_oracle(int p, const Coalition& s, const topology::NetworkGraph& g, const DemandProfile& d,
                      const ContentCatalog& cat, const CachingParams& prm)
{
	const auto shares = union_shapley(s, d, cat, prm.c_bs);
	const auto hops = hops_within(g, s);
	double sharing = 0.0;
	for (int f : d.demands[std::size_t(p)])
	{
		int best = -1;
		int best_total = std::numeric_limits<int>::max();
		for (int j : s.members)
		{
			const auto& dj = d.demands[std::size_t(j)];
			if (std::find(dj.begin(), dj.end(), f) == dj.end())
			{
				continue;
			}
			int total = 0;
			for (int k : s.members)
			{
				const auto& dk = d.demands[std::size_t(k)];
				if (k != j && std::find(dk.begin(), dk.end(), f) != dk.end())
				{
					total += hops.at({j, k});
				}
			}
			if (total < best_total)
			{
				best_total = total;
				best = j;
			}
		}
		if (best != p)
		{
			sharing += cat.sizes[std::size_t(f)] * prm.c_share * hops.at({best, p});
		}
	}
	return -(shares.at(p) + sharing);
}

} // namespace

TEST_CASE("coalition download cost examples")
{
	const auto cat = ContentCatalog::uniform(5, 1.0);
	const CachingParams prm;
	SUBCASE("identical demands cost one copy")
	{
		const DemandProfile d{{{0, 2}, {0, 2}, {0, 2}}};
		for (const auto& s : {co({0}), co({0, 1}), co({0, 1, 2})})
		{
			CHECK(coalition_download_cost(s, d, cat, prm) == 2.0);
		}
	}
	SUBCASE("disjoint demands add up")
	{
		const DemandProfile d{{{0}, {1, 2}, {3, 4}}};
		CHECK(coalition_download_cost(co({0, 1, 2}), d, cat, prm) == 5.0);
	}
	SUBCASE("overlapping pair")
	{
		const DemandProfile d{{{1, 2}, {2, 3}}};
		CHECK(coalition_download_cost(co({0, 1}), d, cat, prm) == 3.0);
	}
	SUBCASE("errors")
	{
		const DemandProfile d{{{1, 2}, {2, 9}}};
		CHECK_THROWS(coalition_download_cost(co({0, 1}), d, cat, prm));
		CHECK_THROWS(coalition_download_cost(co({0, 5}), DemandProfile{{{1}, {2}}}, cat, prm));
		CHECK_THROWS(coalition_download_cost(co({}), DemandProfile{{{1}}}, cat, prm));
	}
}

TEST_CASE("download share examples")
{
	const auto cat = ContentCatalog::uniform(5, 1.0);
	const CachingParams prm;
	SUBCASE("one shared unit content, four members")
	{
		const DemandProfile d{{{3}, {3}, {3}, {3}}};
		const auto a = download_shares(co({0, 1, 2, 3}), d, cat, prm);
		for (int p = 0; p < 4; ++p)
		{
			CHECK(a.at(p) == doctest::Approx(0.25));
		}
	}
	SUBCASE("overlapping pair")
	{
		const DemandProfile d{{{1, 2}, {2, 3}}};
		const auto a = download_shares(co({0, 1}), d, cat, prm);
		CHECK(a.at(0) == doctest::Approx(1.5));
		CHECK(a.at(1) == doctest::Approx(1.5));
	}
	SUBCASE("disjoint player pays its standalone cost")
	{
		const DemandProfile d{{{0, 1}, {1, 2}, {3, 4}}};
		const auto a = download_shares(co({0, 1, 2}), d, cat, prm);
		CHECK(a.at(2) == doctest::Approx(standalone_cost(2, d, cat, prm)));
	}
}

TEST_CASE("download shares match the per-content closed form")
{
	Rng rng(7);
	for (int trial = 0; trial < 40; ++trial)
	{
		const int n = 1 + static_cast<int>(uniform_index(rng, 10));
		ContentCatalog cat;
		for (int f = 0; f < 8; ++f)
		{
			cat.sizes.push_back(0.5 + 3.0 * uniform01(rng));
		}
		DemandProfile d;
		std::vector<int> members;
		for (int p = 0; p < n; ++p)
		{
			std::set<int> want{static_cast<int>(uniform_index(rng, 8))};
			while (uniform01(rng) < 0.6)
			{
				want.insert(static_cast<int>(uniform_index(rng, 8)));
			}
			d.demands.emplace_back(want.begin(), want.end());
			members.push_back(p);
		}
		CachingParams prm;
		prm.c_bs = 0.5 + uniform01(rng);
		const auto s = co(members);
		const auto a = download_shares(s, d, cat, prm);
		const auto oracle = union_shapley(s, d, cat, prm.c_bs);
		for (int p : members)
		{
			CHECK(a.at(p) == doctest::Approx(oracle.at(p)).epsilon(1e-9));
			// Individually rational against the standalone cost.
			CHECK(a.at(p) <= standalone_cost(p, d, cat, prm) + 1e-9);
		}
		CHECK(a.sum() == doctest::Approx(coalition_download_cost(s, d, cat, prm)));
		double standalone_sum = 0.0;
		for (int p : members)
		{
			standalone_sum += standalone_cost(p, d, cat, prm);
		}
		CHECK(coalition_download_cost(s, d, cat, prm) <= standalone_sum + 1e-9);
	}
}

TEST_CASE("large coalitions use a seeded Monte Carlo estimate close to the closed form")
{
	const auto cat = ContentCatalog::uniform(30, 1.0);
	const CachingParams prm;
	DemandProfile d;
	std::vector<int> members;
	for (int p = 0; p < 14; ++p)
	{
		d.demands.push_back({p % 5, 5 + p % 3, 10 + p});
		members.push_back(p);
	}
	const auto s = co(members);
	const auto a = download_shares(s, d, cat, prm, 3);
	const auto b = download_shares(s, d, cat, prm, 3);
	CHECK(a.shares == b.shares);
	CHECK(a.sum() == doctest::Approx(coalition_download_cost(s, d, cat, prm)).epsilon(1e-9));
	const auto oracle = union_shapley(s, d, cat, prm.c_bs);
	for (int p : members)
	{
		CHECK(std::abs(a.at(p) - oracle.at(p)) < 0.05);
	}
}

TEST_CASE("downloader assignment examples")
{
	const auto cat = ContentCatalog::uniform(4, 1.0);
	const CachingParams prm;
	SUBCASE("single requester downloads")
	{
		const auto g = path3();
		const DemandProfile d{{{0}, {1}, {2}}};
		const auto m = assign_downloaders(co({0, 1, 2}), g, d, cat, prm);
		CHECK(m == DownloaderMap{{0, 0}, {1, 1}, {2, 2}});
	}
	SUBCASE("path ends tie, lowest id wins")
	{
		const auto g = path3();
		const DemandProfile d{{{3}, {0}, {3}}};
		const auto m = assign_downloaders(co({0, 1, 2}), g, d, cat, prm);
		CHECK(m.at(3) == 0);
	}
	SUBCASE("star hub fetches what it shares with leaves")
	{
		const auto g = star5();
		REQUIRE(g.edge_count() == 4);
		const DemandProfile d{{{2}, {2}, {2}, {1}, {2}}};
		const auto m = assign_downloaders(co({0, 1, 2, 3, 4}), g, d, cat, prm);
		CHECK(m.at(2) == 0);
		CHECK(m.at(1) == 3);
	}
}

TEST_CASE("sharing cost examples")
{
	const auto g = path3();
	const auto cat = ContentCatalog{{1.0, 2.0}};
	CachingParams prm;
	const DemandProfile d{{{1}, {0}, {1}}};
	const auto s = co({0, 1, 2});
	const auto m = assign_downloaders(s, g, d, cat, prm);
	REQUIRE(m.at(1) == 0);
	CHECK(sharing_cost(2, s, g, d, cat, prm, m) == doctest::Approx(0.4));
	CHECK(sharing_cost(0, s, g, d, cat, prm, m) == 0.0);
	CHECK(sharing_cost(1, s, g, d, cat, prm, m) == 0.0);
	CHECK(sharing_cost(0, co({0}), g, d, cat, prm, assign_downloaders(co({0}), g, d, cat, prm)) == 0.0);
	prm.c_share = 0.0;
	for (int p = 0; p < 3; ++p)
	{
		CHECK(sharing_cost(p, s, g, d, cat, prm, m) == 0.0);
	}
}

TEST_CASE("caching game examples")
{
	const auto cat = ContentCatalog::uniform(6, 1.0);
	const CachingParams prm;
	SUBCASE("singleton utility is the negated standalone cost")
	{
		const auto g = path3();
		const DemandProfile d{{{0, 1}, {2}, {3, 4, 5}}};
		const auto game = build_caching_game(g, d, cat, prm);
		for (int p = 0; p < 3; ++p)
		{
			CHECK(game.utility(p, co({p})) == -standalone_cost(p, d, cat, prm));
		}
	}
	SUBCASE("adjacent identical demands both gain from pairing")
	{
		const auto g = path3();
		const DemandProfile d{{{0, 1, 2}, {0, 1, 2}, {5}}};
		const auto game = build_caching_game(g, d, cat, prm);
		CHECK(game.feasible(co({0, 1})));
		// Shares 1.5 each; the non-downloader pays 3 * 0.1 * 1 hop in the
		// worst case, still below the standalone 3.
		CHECK(game.utility(0, co({0, 1})) > game.utility(0, co({0})));
		CHECK(game.utility(1, co({0, 1})) > game.utility(1, co({1})));
	}
	SUBCASE("non-adjacent pair is infeasible")
	{
		const auto g = path3();
		const DemandProfile d{{{0}, {1}, {0}}};
		const auto game = build_caching_game(g, d, cat, prm);
		CHECK_FALSE(game.feasible(co({0, 2})));
		CHECK(game.feasible(co({0, 1, 2})));
	}
}

TEST_CASE("caching utilities match an independent oracle on random topologies")
{
	const auto cat = ContentCatalog::uniform(10, 1.5);
	for (std::uint64_t seed = 0; seed < 10; ++seed)
	{
		const auto g = topology::generate_uniform(8, {40, 40}, 18, topology::NodeKind::small_cell, seed);
		const auto d = generate_demands(g, cat, 0.8, 3, seed);
		CachingParams prm;
		prm.c_share = 0.2;
		const auto game = build_caching_game(g, d, cat, prm, seed);
		for (unsigned mask = 1; mask < 256; ++mask)
		{
			std::vector<int> m;
			for (int p = 0; p < 8; ++p)
			{
				if (mask >> p & 1u)
				{
					m.push_back(p);
				}
			}
			const auto s = co(m);
			CHECK(game.feasible(s) == topology::coalition_feasible(g, m));
			if (!game.feasible(s))
			{
				continue;
			}
			const auto u = game.utilities(s);
			for (std::size_t k = 0; k < m.size(); ++k)
			{
				CHECK(u[k] == doctest::Approx(utility_oracle(m[k], s, g, d, cat, prm)).epsilon(1e-9));
			}
		}
	}
}

TEST_CASE("with free sharing the grand coalition weakly dominates")
{
	const auto cat = ContentCatalog::uniform(12, 1.0);
	CachingParams prm;
	prm.c_share = 0.0;
	for (std::uint64_t seed = 0; seed < 10; ++seed)
	{
		// Radius above the diagonal: complete graph, so the grand coalition is feasible.
		const auto g = topology::generate_uniform(7, {10, 10}, 15, topology::NodeKind::small_cell, seed);
		const auto d = generate_demands(g, cat, 0.5, 4, seed);
		const auto game = build_caching_game(g, d, cat, prm);
		const double grand = partition_cost(game, Partition::grand(7)).total;
		Rng rng(seed);
		for (int t = 0; t < 50; ++t)
		{
			std::vector<int> labels;
			for (int p = 0; p < 7; ++p)
			{
				labels.push_back(static_cast<int>(uniform_index(rng, 4)));
			}
			CHECK(grand <= partition_cost(game, Partition::from_labels(labels)).total + 1e-9);
		}
		CHECK(grand <= baseline_cost(d, cat, prm).total + 1e-9);
	}
}

TEST_CASE("baseline cost is everyone alone")
{
	const auto cat = ContentCatalog::uniform(6, 2.0);
	const CachingParams prm;
	const DemandProfile d{{{0, 1}, {2}, {3, 4, 5}}};
	const auto b = baseline_cost(d, cat, prm);
	CHECK(b.total == doctest::Approx(12.0));
	CHECK(b.mean == doctest::Approx(4.0));
	const auto game = build_caching_game(path3(), d, cat, prm);
	const auto alone = partition_cost(game, Partition::singletons(3));
	CHECK(alone.total == doctest::Approx(b.total));
}

TEST_CASE("demand generation")
{
	const auto one = topology::generate_uniform(1, {1, 1}, 1, topology::NodeKind::user, 0);
	SUBCASE("zero skew is uniform within 3 sigma")
	{
		const auto cat = ContentCatalog::uniform(10, 1.0);
		std::vector<int> counts(10, 0);
		const int draws = 10000;
		for (int k = 0; k < draws; ++k)
		{
			const auto d = generate_demands(one, cat, 0.0, 1, static_cast<std::uint64_t>(k));
			++counts[std::size_t(d.of(0).front())];
		}
		const double expect = draws / 10.0;
		const double sigma = std::sqrt(draws * 0.1 * 0.9);
		for (int c : counts)
		{
			CHECK(std::abs(c - expect) <= 3 * sigma);
		}
	}
	SUBCASE("positive skew favours low ranks")
	{
		const auto cat = ContentCatalog::uniform(10, 1.0);
		std::vector<int> counts(10, 0);
		for (int k = 0; k < 5000; ++k)
		{
			const auto d = generate_demands(one, cat, 1.2, 1, static_cast<std::uint64_t>(k));
			++counts[std::size_t(d.of(0).front())];
		}
		CHECK(counts.front() > 2 * counts.back());
	}
	SUBCASE("full catalog, distinctness and determinism")
	{
		const auto g = topology::generate_uniform(12, {50, 50}, 10, topology::NodeKind::user, 3);
		const auto cat = ContentCatalog::uniform(7, 1.0);
		const auto all = generate_demands(g, cat, 0.8, 7, 1);
		for (int p = 0; p < 12; ++p)
		{
			CHECK(all.of(p) == std::vector<int>{0, 1, 2, 3, 4, 5, 6});
		}
		const auto a = generate_demands(g, cat, 0.8, 3, 99);
		const auto b = generate_demands(g, cat, 0.8, 3, 99);
		CHECK(a.demands == b.demands);
		for (const auto& row : a.demands)
		{
			CHECK(row.size() == 3);
			CHECK(std::set<int>(row.begin(), row.end()).size() == 3);
		}
		CHECK_THROWS(generate_demands(g, cat, 0.8, 8, 1));
		CHECK_THROWS(generate_demands(g, cat, 0.8, 0, 1));
	}
}

TEST_CASE("parameter validation")
{
	CachingParams prm;
	CHECK_NOTHROW(prm.validate());
	prm.c_bs = 0.0;
	CHECK_THROWS(prm.validate());
	prm = CachingParams{};
	prm.c_share = -0.1;
	CHECK_THROWS(prm.validate());
	prm = CachingParams{};
	prm.popularity_skew = -1;
	CHECK_THROWS(prm.validate());
	CHECK_THROWS(ContentCatalog::uniform(3, 0.0));
}
