#pragma once

#include <cagb/auction.hpp>
#include <cagb/coalition_engine.hpp>
#include <cagb/topology.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace cagb::harness {

enum class Scenario
{
	caching,
	auction,
	lcg
};

std::string to_string(Scenario s);

/// Validation failure; `key()` names the offending config key.
class ConfigError : public std::invalid_argument
{
public:
	ConfigError(std::string key, const std::string& what);
	const std::string& key() const { return key_; }

private:
	std::string key_;
};

/// `baseline` is the non-grouping reference (everybody alone).
enum class CachingOrder
{
	pareto,
	coalition,
	selfish,
	baseline
};

std::string to_string(CachingOrder o);

struct CachingConfig
{
	int n_players = 20;
	topology::Area area{100.0, 100.0};
	double radius = 29.5; // mean degree about 4 for 20 nodes on 100 x 100
	int catalog_size = 50;
	double content_size_mb = 1.0;
	int demand_per_player = 5;
	double zipf_skew = 0.8;
	double c_bs = 1.0;
	double c_share = 0.1;
	std::vector<CachingOrder> orders{CachingOrder::pareto, CachingOrder::coalition, CachingOrder::selfish,
	                                 CachingOrder::baseline};
	coalition::Dynamics dynamics = coalition::Dynamics::switch_only;
	int max_iters = 10000;
};

struct AuctionConfig
{
	auction::AuctionParams params;
	std::vector<int> buyer_counts{10, 20, 30, 40, 50, 60};
};

struct LcgConfig
{
	int n_players = 30;
	topology::Area area{100.0, 100.0};
	double radius = 25.0;
	int channels = 4;
	int max_iters = 100000;
};

struct ExperimentConfig
{
	Scenario scenario = Scenario::caching;
	std::vector<std::uint64_t> seeds;
	std::optional<std::string> output;
	CachingConfig caching;
	AuctionConfig auction;
	LcgConfig lcg;
};

enum class KeyType
{
	integer,
	number,
	text,
	text_or_list,
	integer_list,
	pair
};

/// Keys accepted for a scenario (including the shared ones) and their types.
std::vector<std::pair<std::string, KeyType>> schema_for(Scenario s);

/// Strict parse: unknown keys, wrong types and out-of-range values throw
/// ConfigError before anything runs.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

} // namespace cagb::harness
