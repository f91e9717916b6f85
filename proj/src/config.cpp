#include <cagb/config.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

namespace cagb::harness {

std::string to_string(Scenario s)
{
	switch (s)
	{
	case Scenario::caching: return "caching";
	case Scenario::auction: return "auction";
	case Scenario::lcg: return "lcg";
	}
	return "caching";
}

std::string to_string(CachingOrder o)
{
	switch (o)
	{
	case CachingOrder::pareto: return "pareto";
	case CachingOrder::coalition: return "coalition";
	case CachingOrder::selfish: return "selfish";
	case CachingOrder::baseline: return "baseline";
	}
	return "pareto";
}

ConfigError::ConfigError(std::string key, const std::string& what)
	: std::invalid_argument("config key '" + key + "': " + what), key_(std::move(key))
{
}

std::vector<std::pair<std::string, KeyType>> schema_for(Scenario s)
{
	std::vector<std::pair<std::string, KeyType>> keys{
	    {"scenario", KeyType::text}, {"seed", KeyType::integer}, {"seeds", KeyType::integer_list},
	    {"output", KeyType::text}};
	switch (s)
	{
	case Scenario::caching:
		keys.insert(keys.end(), {{"n_players", KeyType::integer},
		                         {"area", KeyType::pair},
		                         {"radius", KeyType::number},
		                         {"catalog_size", KeyType::integer},
		                         {"content_size_mb", KeyType::number},
		                         {"demand_per_player", KeyType::integer},
		                         {"zipf_skew", KeyType::number},
		                         {"c_bs", KeyType::number},
		                         {"c_share", KeyType::number},
		                         {"order", KeyType::text_or_list},
		                         {"dynamics", KeyType::text},
		                         {"max_iters", KeyType::integer}});
		break;
	case Scenario::auction:
		keys.insert(keys.end(), {{"n_channels", KeyType::integer},
		                         {"ask_range", KeyType::pair},
		                         {"valuation_range", KeyType::pair},
		                         {"demand_max", KeyType::integer},
		                         {"buyer_counts", KeyType::integer_list},
		                         {"interference_radius", KeyType::number},
		                         {"max_iters", KeyType::integer}});
		break;
	case Scenario::lcg:
		keys.insert(keys.end(), {{"n_players", KeyType::integer},
		                         {"area", KeyType::pair},
		                         {"radius", KeyType::number},
		                         {"channels", KeyType::integer},
		                         {"max_iters", KeyType::integer}});
		break;
	}
	return keys;
}

namespace {

using nlohmann::json;

void check_type(const std::string& key, const json& v, KeyType type)
{
	bool ok = false;
	switch (type)
	{
	case KeyType::integer: ok = v.is_number_integer(); break;
	case KeyType::number: ok = v.is_number(); break;
	case KeyType::text: ok = v.is_string(); break;
	case KeyType::text_or_list:
		ok = v.is_string()
		     || (v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_string(); }));
		break;
	case KeyType::integer_list:
		ok = v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number_integer(); });
		break;
	case KeyType::pair:
		ok = v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number();
		break;
	}
	if (!ok)
	{
		static const char* names[] = {"an integer", "a number", "a string", "a string or list of strings",
		                              "a list of integers", "a pair of numbers"};
		throw ConfigError(key, std::string("must be ") + names[static_cast<int>(type)]);
	}
}

template <typename T>
void read(const json& doc, const std::string& key, T& out)
{
	if (doc.contains(key))
	{
		out = doc.at(key).get<T>();
	}
}

void require(bool ok, const std::string& key, const std::string& what)
{
	if (!ok)
	{
		throw ConfigError(key, what);
	}
}

int read_int(const json& doc, const std::string& key, int fallback, long long lo, long long hi)
{
	if (!doc.contains(key))
	{
		return fallback;
	}
	const auto v = doc.at(key).get<long long>();
	require(v >= lo && v <= hi, key, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
	return static_cast<int>(v);
}

double read_number(const json& doc, const std::string& key, double fallback, double lo, bool lo_strict)
{
	if (!doc.contains(key))
	{
		return fallback;
	}
	const double v = doc.at(key).get<double>();
	require(std::isfinite(v) && (lo_strict ? v > lo : v >= lo), key,
	        std::string("must be finite and ") + (lo_strict ? "> " : ">= ") + std::to_string(lo));
	return v;
}

topology::Area read_area(const json& doc, const std::string& key, topology::Area fallback)
{
	if (!doc.contains(key))
	{
		return fallback;
	}
	topology::Area a{doc.at(key)[0].get<double>(), doc.at(key)[1].get<double>()};
	require(a.width > 0.0 && a.height > 0.0 && std::isfinite(a.width) && std::isfinite(a.height), key,
	        "width and height must be positive");
	return a;
}

std::pair<double, double> read_range(const json& doc, const std::string& key, std::pair<double, double> fallback)
{
	if (!doc.contains(key))
	{
		return fallback;
	}
	const double lo = doc.at(key)[0].get<double>();
	const double hi = doc.at(key)[1].get<double>();
	require(std::isfinite(lo) && std::isfinite(hi) && lo >= 0.0 && lo <= hi, key, "must be [lo, hi] with 0 <= lo <= hi");
	return {lo, hi};
}

std::vector<CachingOrder> read_orders(const json& doc)
{
	if (!doc.contains("order"))
	{
		return CachingConfig{}.orders;
	}
	std::vector<std::string> names;
	if (doc.at("order").is_string())
	{
		names.push_back(doc.at("order").get<std::string>());
	}
	else
	{
		names = doc.at("order").get<std::vector<std::string>>();
	}
	require(!names.empty(), "order", "must name at least one order");
	std::vector<CachingOrder> out;
	for (const auto& n : names)
	{
		if (n == "all")
		{
			for (auto o : CachingConfig{}.orders)
			{
				out.push_back(o);
			}
		}
		else if (n == "pareto") out.push_back(CachingOrder::pareto);
		else if (n == "coalition") out.push_back(CachingOrder::coalition);
		else if (n == "selfish") out.push_back(CachingOrder::selfish);
		else if (n == "baseline") out.push_back(CachingOrder::baseline);
		else throw ConfigError("order", "unknown order '" + n + "' (pareto, coalition, selfish, baseline, all)");
	}
	std::vector<CachingOrder> unique;
	for (auto o : out)
	{
		if (std::find(unique.begin(), unique.end(), o) == unique.end())
		{
			unique.push_back(o);
		}
	}
	return unique;
}

} // namespace

ExperimentConfig parse_config(const json& doc)
{
	require(doc.is_object(), "<root>", "config must be a JSON object");
	require(doc.contains("scenario"), "scenario", "missing required key");
	require(doc.at("scenario").is_string(), "scenario", "must be a string");
	ExperimentConfig cfg;
	const auto scenario = doc.at("scenario").get<std::string>();
	if (scenario == "caching") cfg.scenario = Scenario::caching;
	else if (scenario == "auction") cfg.scenario = Scenario::auction;
	else if (scenario == "lcg") cfg.scenario = Scenario::lcg;
	else throw ConfigError("scenario", "unknown scenario '" + scenario + "' (caching, auction, lcg)");

	const auto schema = schema_for(cfg.scenario);
	for (const auto& [key, value] : doc.items())
	{
		const auto it = std::find_if(schema.begin(), schema.end(), [&](const auto& e) { return e.first == key; });
		if (it == schema.end())
		{
			throw ConfigError(key, "unknown key for scenario '" + scenario + "'");
		}
		check_type(key, value, it->second);
	}

	require(!(doc.contains("seed") && doc.contains("seeds")), "seeds", "give either 'seed' or 'seeds', not both");
	require(doc.contains("seed") || doc.contains("seeds"), "seeds", "missing required key ('seed' or 'seeds')");
	const json seeds = doc.contains("seeds") ? doc.at("seeds") : json::array({doc.at("seed")});
	for (const auto& s : seeds)
	{
		require(!s.is_number_integer() || s.get<long long>() >= 0 || s.is_number_unsigned(), "seeds",
		        "seeds must be non-negative");
		cfg.seeds.push_back(s.get<std::uint64_t>());
	}
	if (doc.contains("output"))
	{
		cfg.output = doc.at("output").get<std::string>();
	}

	constexpr long long big = std::numeric_limits<int>::max();
	switch (cfg.scenario)
	{
	case Scenario::caching: {
		auto& c = cfg.caching;
		c.n_players = read_int(doc, "n_players", c.n_players, 1, 64);
		c.area = read_area(doc, "area", c.area);
		c.radius = read_number(doc, "radius", c.radius, 0.0, false);
		c.catalog_size = read_int(doc, "catalog_size", c.catalog_size, 1, 1000000);
		c.content_size_mb = read_number(doc, "content_size_mb", c.content_size_mb, 0.0, true);
		c.demand_per_player = read_int(doc, "demand_per_player", c.demand_per_player, 1, big);
		require(c.demand_per_player <= c.catalog_size, "demand_per_player", "must not exceed catalog_size");
		c.zipf_skew = read_number(doc, "zipf_skew", c.zipf_skew, 0.0, false);
		c.c_bs = read_number(doc, "c_bs", c.c_bs, 0.0, true);
		c.c_share = read_number(doc, "c_share", c.c_share, 0.0, false);
		c.orders = read_orders(doc);
		if (doc.contains("dynamics"))
		{
			try
			{
				c.dynamics = coalition::dynamics_from_string(doc.at("dynamics").get<std::string>());
			}
			catch (const std::invalid_argument& e)
			{
				throw ConfigError("dynamics", e.what());
			}
		}
		c.max_iters = read_int(doc, "max_iters", c.max_iters, 1, big);
		break;
	}
	case Scenario::auction: {
		auto& p = cfg.auction.params;
		p.n_channels = read_int(doc, "n_channels", p.n_channels, 0, 10000);
		std::tie(p.ask_lo, p.ask_hi) = read_range(doc, "ask_range", {p.ask_lo, p.ask_hi});
		std::tie(p.valuation_lo, p.valuation_hi) = read_range(doc, "valuation_range", {p.valuation_lo, p.valuation_hi});
		p.demand_max = read_int(doc, "demand_max", p.demand_max, 1, big);
		p.interference_radius = read_number(doc, "interference_radius", p.interference_radius, 0.0, false);
		p.max_iters = read_int(doc, "max_iters", p.max_iters, 1, big);
		if (doc.contains("buyer_counts"))
		{
			cfg.auction.buyer_counts.clear();
			for (const auto& v : doc.at("buyer_counts"))
			{
				const auto n = v.get<long long>();
				require(n >= 0 && n <= 100000, "buyer_counts", "entries must be in [0, 100000]");
				cfg.auction.buyer_counts.push_back(static_cast<int>(n));
			}
		}
		break;
	}
	case Scenario::lcg: {
		auto& l = cfg.lcg;
		l.n_players = read_int(doc, "n_players", l.n_players, 0, 100000);
		l.area = read_area(doc, "area", l.area);
		l.radius = read_number(doc, "radius", l.radius, 0.0, false);
		l.channels = read_int(doc, "channels", l.channels, 1, 1024);
		l.max_iters = read_int(doc, "max_iters", l.max_iters, 1, big);
		break;
	}
	}
	return cfg;
}

nlohmann::json read_json_file(const std::filesystem::path& path)
{
	std::ifstream in(path);
	if (!in)
	{
		throw ConfigError("<file>", "cannot read " + path.string());
	}
	try
	{
		return nlohmann::json::parse(in);
	}
	catch (const nlohmann::json::parse_error& e)
	{
		throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
	}
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
	return parse_config(read_json_file(path));
}

} // namespace cagb::harness
