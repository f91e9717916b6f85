// Serial reference vs OpenMP kernel timings. Each pair is also checked for
// identical output, so a speedup never hides a divergence.
//
//   cagb_bench [repetitions]     (thread count from OMP_NUM_THREADS)

#include <cagb/coalition_engine.hpp>
#include <cagb/config.hpp>
#include <cagb/cost_sharing.hpp>
#include <cagb/harness.hpp>
#include <cagb/rng.hpp>

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <memory>
#include <string>
#include <vector>

using namespace cagb;

namespace {

// Weighted coverage cost over `items` random items.
shapley::TUGame coverage_game(int n, std::uint64_t seed, int items = 64)
{
	Rng rng(seed);
	auto covers = std::make_shared<std::vector<std::vector<int>>>(static_cast<std::size_t>(n));
	auto weights = std::make_shared<std::vector<double>>();
	for (int k = 0; k < items; ++k)
	{
		weights->push_back(1.0 + uniform01(rng));
	}
	for (auto& c : *covers)
	{
		for (int k = 0; k < items; ++k)
		{
			if (uniform01(rng) < 0.2)
			{
				c.push_back(k);
			}
		}
	}
	shapley::TUGame g;
	for (int i = 0; i < n; ++i)
	{
		g.members.push_back(i);
	}
	g.value = [covers, weights](const std::vector<int>& s) {
		std::vector<char> hit(weights->size(), 0);
		double v = 0.0;
		for (int p : s)
		{
			for (int k : (*covers)[static_cast<std::size_t>(p)])
			{
				if (!hit[static_cast<std::size_t>(k)])
				{
					hit[static_cast<std::size_t>(k)] = 1;
					v += (*weights)[static_cast<std::size_t>(k)];
				}
			}
		}
		return v;
	};
	return g;
}

double best_of(int reps, const std::function<void()>& f)
{
	double best = 1e300;
	for (int r = 0; r < reps; ++r)
	{
		const auto t0 = std::chrono::steady_clock::now();
		f();
		best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
	}
	return best;
}

void report(const char* kernel, double serial_ms, double parallel_ms, bool same)
{
	std::printf("%-34s %12.2f %12.2f %8.2fx  %s\n", kernel, serial_ms, parallel_ms, serial_ms / parallel_ms,
	            same ? "identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv)
{
	const int reps = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
	const int threads = omp_get_max_threads();
	std::printf("threads: %d, repetitions: %d (best time reported)\n\n", threads, reps);
	std::printf("%-34s %12s %12s %9s  %s\n", "kernel", "serial ms", "parallel ms", "speedup", "output");
	bool all_same = true;

	{
		const auto game = coverage_game(10, 1);
		shapley::Allocation a;
		shapley::Allocation b;
		const double s = best_of(reps, [&] { a = shapley::shapley_exact_serial(game); });
		const double p = best_of(reps, [&] { b = shapley::shapley_exact(game); });
		all_same = all_same && a.shares == b.shares;
		report("shapley_exact (n=10)", s, p, a.shares == b.shares);
	}
	{
		const auto game = coverage_game(40, 2);
		shapley::Allocation a;
		shapley::Allocation b;
		const double s = best_of(reps, [&] { a = shapley::shapley_montecarlo_serial(game, 20000, 7); });
		const double p = best_of(reps, [&] { b = shapley::shapley_montecarlo(game, 20000, 7); });
		all_same = all_same && a.shares == b.shares;
		report("shapley_montecarlo (n=40, 2e4)", s, p, a.shares == b.shares);
	}
	{
		harness::CachingConfig cfg;
		cfg.n_players = 9;
		cfg.area = {65.0, 65.0};
		cfg.catalog_size = 15;
		cfg.demand_per_player = 3;
		const auto inst = harness::make_caching_instance(cfg, 3);
		coalition::StableSet a;
		coalition::StableSet b;
		const auto order = coalition::PreferenceOrder::pareto;
		const double s = best_of(reps, [&] {
			a = coalition::enumerate_stable_partitions_serial(inst.game, inst.neighborhood, order);
		});
		const double p =
		    best_of(reps, [&] { b = coalition::enumerate_stable_partitions(inst.game, inst.neighborhood, order); });
		all_same = all_same && a.partitions == b.partitions;
		report("enumerate_stable_partitions (n=9)", s, p, a.partitions == b.partitions);
	}
	{
		nlohmann::json doc{{"scenario", "caching"}, {"seeds", {0, 1, 2, 3, 4, 5, 6, 7}}};
		const auto cfg = harness::parse_config(doc);
		std::string a;
		std::string b;
		const double s = best_of(reps, [&] { a = harness::to_csv(harness::run_experiment(cfg, {1, false})); });
		const double p = best_of(reps, [&] { b = harness::to_csv(harness::run_experiment(cfg, {threads, false})); });
		all_same = all_same && a == b;
		report("caching experiment (8 seeds)", s, p, a == b);
	}
	return all_same ? 0 : 1;
}
