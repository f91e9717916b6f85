#include <cagb/harness.hpp>

#include <cagb/auction.hpp>
#include <cagb/lcg.hpp>
#include <cagb/rng.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unistd.h>

#include <omp.h>

namespace cagb::harness {

namespace {

std::string num(double v)
{
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.10g", v);
	return buf;
}

coalition::PreferenceOrder engine_order(CachingOrder o)
{
	switch (o)
	{
	case CachingOrder::coalition: return coalition::PreferenceOrder::coalition;
	case CachingOrder::selfish: return coalition::PreferenceOrder::selfish;
	default: return coalition::PreferenceOrder::pareto;
	}
}

} // namespace

std::vector<std::string> columns_for(Scenario s)
{
	switch (s)
	{
	case Scenario::caching:
		return {"seed", "order", "n_players", "mean_cost", "total_cost", "n_coalitions", "max_coalition_size",
		        "iterations", "status"};
	case Scenario::auction: return {"algorithm", "n_buyers", "seed", "selling_ratio", "satisfaction", "revenue"};
	case Scenario::lcg: return {"seed", "K", "iterations", "final_potential", "collision_free"};
	}
	return {};
}

CachingInstance make_caching_instance(const CachingConfig& config, std::uint64_t seed)
{
	auto graph = topology::generate_uniform(static_cast<std::size_t>(config.n_players), config.area, config.radius,
	                                        topology::NodeKind::small_cell, derive_seed(seed, 1));
	auto catalog = caching::ContentCatalog::uniform(static_cast<std::size_t>(config.catalog_size),
	                                                config.content_size_mb);
	caching::CachingParams params{config.c_bs, config.c_share, config.zipf_skew};
	auto demands = caching::generate_demands(graph, catalog, config.zipf_skew,
	                                         static_cast<std::size_t>(config.demand_per_player), derive_seed(seed, 2));
	auto game = caching::build_caching_game(graph, demands, catalog, params, derive_seed(seed, 3));
	auto nbr = coalition::Neighborhood::from_graph(graph);
	return CachingInstance{std::move(graph), std::move(catalog), std::move(demands), params, std::move(game),
	                       std::move(nbr)};
}

std::uint64_t engine_seed(std::uint64_t seed, CachingOrder order)
{
	return derive_seed(seed, 16 + static_cast<std::uint64_t>(order));
}

coalition::RunResult default_engine_runner(const CachingInstance& instance, coalition::PreferenceOrder order,
                                           const CachingConfig& config, std::uint64_t seed)
{
	return coalition::run_until_stable(instance.game, instance.neighborhood, order, config.dynamics, seed,
	                                   config.max_iters);
}

namespace {

using Rows = std::vector<std::vector<std::string>>;

struct Cell
{
	std::uint64_t seed = 0;
	CachingOrder order = CachingOrder::pareto; // caching
	int n_buyers = 0;                          // auction
};

std::vector<Cell> cells_for(const ExperimentConfig& config)
{
	std::vector<Cell> cells;
	switch (config.scenario)
	{
	case Scenario::caching:
		for (auto seed : config.seeds)
		{
			for (auto order : config.caching.orders)
			{
				cells.push_back(Cell{seed, order, 0});
			}
		}
		break;
	case Scenario::auction:
		for (int n : config.auction.buyer_counts)
		{
			for (auto seed : config.seeds)
			{
				cells.push_back(Cell{seed, CachingOrder::pareto, n});
			}
		}
		break;
	case Scenario::lcg:
		for (auto seed : config.seeds)
		{
			cells.push_back(Cell{seed, CachingOrder::pareto, 0});
		}
		break;
	}
	return cells;
}

Rows run_caching_cell(const CachingConfig& config, const Cell& cell)
{
	const auto instance = make_caching_instance(config, cell.seed);
	coalition::Partition final_partition = coalition::Partition::singletons(config.n_players);
	int iterations = 0;
	std::string status = "stable";
	if (cell.order != CachingOrder::baseline)
	{
		auto run = default_engine_runner(instance, engine_order(cell.order), config, engine_seed(cell.seed, cell.order));
		final_partition = std::move(run.partition);
		iterations = static_cast<int>(run.trace.entries.size());
		status = coalition::to_string(run.trace.status);
	}
	const auto cost = caching::partition_cost(instance.game, final_partition);
	return {{std::to_string(cell.seed), to_string(cell.order), std::to_string(config.n_players), num(cost.mean),
	         num(cost.total), std::to_string(final_partition.size()),
	         std::to_string(final_partition.max_coalition_size()), std::to_string(iterations), status}};
}

Rows run_auction_cell(const AuctionConfig& config, const Cell& cell)
{
	Rows rows;
	for (const auto& r : auction::run_auction_cell(config.params, cell.n_buyers, cell.seed))
	{
		rows.push_back({r.algorithm, std::to_string(r.n_buyers), std::to_string(r.seed), num(r.outcome.selling_ratio),
		                num(r.outcome.satisfaction), num(r.outcome.revenue)});
	}
	return rows;
}

Rows run_lcg_cell(const LcgConfig& config, const Cell& cell)
{
	const auto graph = topology::generate_uniform(static_cast<std::size_t>(config.n_players), config.area,
	                                              config.radius, topology::NodeKind::user, derive_seed(cell.seed, 1));
	const auto res = lcg::best_response_dynamics(graph, config.channels, derive_seed(cell.seed, 2), config.max_iters);
	return {{std::to_string(cell.seed), std::to_string(config.channels), std::to_string(res.iterations()),
	         num(lcg::potential(res.state, graph)), lcg::collision_free(res.state, graph) ? "true" : "false"}};
}

Rows run_cell(const ExperimentConfig& config, const Cell& cell)
{
	switch (config.scenario)
	{
	case Scenario::caching: return run_caching_cell(config.caching, cell);
	case Scenario::auction: return run_auction_cell(config.auction, cell);
	case Scenario::lcg: return run_lcg_cell(config.lcg, cell);
	}
	return {};
}

} // namespace

Table run_experiment(const ExperimentConfig& config, const RunOptions& options)
{
	if (options.jobs < 1)
	{
		throw std::invalid_argument("jobs must be >= 1");
	}
	const auto cells = cells_for(config);
	std::vector<Rows> results(cells.size());
	std::vector<double> wall_ms(cells.size(), 0.0);
	std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 1) num_threads(options.jobs)
	for (std::int64_t i = 0; i < static_cast<std::int64_t>(cells.size()); ++i)
	{
		const auto ui = static_cast<std::size_t>(i);
		try
		{
			const auto start = std::chrono::steady_clock::now();
			results[ui] = run_cell(config, cells[ui]);
			wall_ms[ui] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
		}
		catch (...)
		{
#pragma omp critical(cagb_cell_failure)
			if (!failure)
			{
				failure = std::current_exception();
			}
		}
	}
	if (failure)
	{
		std::rethrow_exception(failure);
	}

	Table table{columns_for(config.scenario), {}};
	if (options.timing)
	{
		table.header.push_back("wall_ms");
	}
	for (std::size_t i = 0; i < results.size(); ++i)
	{
		for (auto& row : results[i])
		{
			if (options.timing)
			{
				row.push_back(num(wall_ms[i]));
			}
			table.rows.push_back(std::move(row));
		}
	}
	return table;
}

namespace {

std::string csv_field(const std::string& f)
{
	if (f.find_first_of(",\"\r\n") == std::string::npos)
	{
		return f;
	}
	std::string out = "\"";
	for (char c : f)
	{
		if (c == '"')
		{
			out += '"';
		}
		out += c;
	}
	return out + "\"";
}

void csv_line(std::string& out, const std::vector<std::string>& fields)
{
	for (std::size_t i = 0; i < fields.size(); ++i)
	{
		if (i)
		{
			out += ',';
		}
		out += csv_field(fields[i]);
	}
	out += "\r\n";
}

} // namespace

std::string to_csv(const Table& table)
{
	std::string out;
	csv_line(out, table.header);
	for (const auto& row : table.rows)
	{
		csv_line(out, row);
	}
	return out;
}

std::string to_jsonl(const Table& table)
{
	std::string out;
	for (const auto& row : table.rows)
	{
		nlohmann::ordered_json obj;
		for (std::size_t i = 0; i < table.header.size(); ++i)
		{
			// Numeric and boolean cells keep their JSON type; the rest are strings.
			auto value = nlohmann::ordered_json::parse(row.at(i), nullptr, false);
			if (value.is_number() || value.is_boolean())
			{
				obj[table.header[i]] = std::move(value);
			}
			else
			{
				obj[table.header[i]] = row.at(i);
			}
		}
		out += obj.dump() + "\n";
	}
	return out;
}

std::string render(const Table& table, Format format)
{
	return format == Format::csv ? to_csv(table) : to_jsonl(table);
}

void write_atomic(const std::filesystem::path& path, const std::string& content)
{
	auto tmp = path;
	tmp += ".tmp." + std::to_string(::getpid());
	{
		std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
		if (!out)
		{
			throw std::runtime_error("cannot open " + tmp.string() + " for writing");
		}
		out.write(content.data(), static_cast<std::streamsize>(content.size()));
		out.flush();
		if (!out)
		{
			out.close();
			std::filesystem::remove(tmp);
			throw std::runtime_error("failed writing " + tmp.string());
		}
	}
	std::error_code ec;
	std::filesystem::rename(tmp, path, ec);
	if (ec)
	{
		std::filesystem::remove(tmp);
		throw std::runtime_error("cannot move output into place at " + path.string() + ": " + ec.message());
	}
}

int verify(const ExperimentConfig& config, std::ostream& out, const EngineRunner& runner)
{
	if (config.scenario != Scenario::caching)
	{
		throw ConfigError("scenario", "verify supports the caching scenario only");
	}
	if (config.caching.n_players > kVerifyMaxPlayers)
	{
		throw ConfigError("n_players", "verify needs n_players <= " + std::to_string(kVerifyMaxPlayers)
		                                   + " for the brute-force oracle");
	}
	int runs = 0;
	int checked = 0;
	int failures = 0;
	for (auto seed : config.seeds)
	{
		const auto instance = make_caching_instance(config.caching, seed);
		for (auto order : config.caching.orders)
		{
			if (order == CachingOrder::baseline)
			{
				continue;
			}
			const auto engine = engine_order(order);
			const auto result = runner(instance, engine, config.caching, engine_seed(seed, order));
			++runs;
			if (result.trace.status != coalition::Status::stable)
			{
				continue;
			}
			++checked;
			const auto oracle = coalition::enumerate_stable_partitions(instance.game, instance.neighborhood, engine);
			if (oracle.contains(result.partition))
			{
				continue;
			}
			++failures;
			out << "FAIL seed=" << seed << " order=" << coalition::to_string(engine)
			    << " partition=" << result.partition.canonical() << " is not in the stable set ("
			    << oracle.partitions.size() << " of " << oracle.scanned << " partitions)\n";
			coalition::UtilityCache cache(instance.game);
			if (!coalition::respects_feasibility(cache, result.partition))
			{
				out << "  witness: a coalition of size >= 2 is infeasible\n";
			}
			else if (auto move = coalition::find_approved_move(cache, instance.neighborhood, result.partition, engine))
			{
				out << "  witness: approved move " << move->to_string() << '\n';
			}
		}
	}
	out << "verify: " << runs << " runs, " << checked << " ended stable, " << failures << " outside the oracle set\n";
	return failures == 0 ? 0 : 1;
}

namespace {

bool parse_integer(const std::string& s, long long& out)
{
	const auto* end = s.data() + s.size();
	auto [p, ec] = std::from_chars(s.data(), end, out);
	return ec == std::errc() && p == end;
}

bool parse_number(const std::string& s, double& out)
{
	if (s.empty())
	{
		return false;
	}
	std::istringstream in(s);
	in.imbue(std::locale::classic());
	in >> out;
	return in && in.peek() == std::char_traits<char>::eof();
}

} // namespace

Table sweep(const nlohmann::json& config, const std::string& key, const std::vector<std::string>& values,
            const RunOptions& options)
{
	const auto base = parse_config(config); // validates the unmodified config first
	const auto schema = schema_for(base.scenario);
	const auto it = std::find_if(schema.begin(), schema.end(), [&](const auto& e) { return e.first == key; });
	if (it == schema.end())
	{
		throw ConfigError(key, "not a key of the " + to_string(base.scenario) + " schema");
	}
	if (key == "scenario" || key == "output" || it->second == KeyType::pair)
	{
		throw ConfigError(key, "cannot be swept");
	}
	if (values.empty())
	{
		throw ConfigError(key, "sweep needs at least one value");
	}
	Table out{{"sweep_value"}, {}};
	for (const auto& c : columns_for(base.scenario))
	{
		out.header.push_back(c);
	}
	if (options.timing)
	{
		out.header.push_back("wall_ms");
	}
	for (const auto& value : values)
	{
		nlohmann::json doc = config;
		long long i = 0;
		double d = 0.0;
		switch (it->second)
		{
		case KeyType::integer:
			if (!parse_integer(value, i)) throw ConfigError(key, "sweep value '" + value + "' is not an integer");
			doc[key] = i;
			break;
		case KeyType::integer_list:
			if (!parse_integer(value, i)) throw ConfigError(key, "sweep value '" + value + "' is not an integer");
			doc[key] = nlohmann::json::array({i});
			break;
		case KeyType::number:
			if (!parse_number(value, d)) throw ConfigError(key, "sweep value '" + value + "' is not numeric");
			doc[key] = d;
			break;
		default:
			doc[key] = value;
			break;
		}
		if (key == "seed" && doc.contains("seeds"))
		{
			doc.erase("seeds");
		}
		if (key == "seeds" && doc.contains("seed"))
		{
			doc.erase("seed");
		}
		const auto table = run_experiment(parse_config(doc), options);
		for (const auto& row : table.rows)
		{
			std::vector<std::string> line{value};
			line.insert(line.end(), row.begin(), row.end());
			out.rows.push_back(std::move(line));
		}
	}
	return out;
}

} // namespace cagb::harness
