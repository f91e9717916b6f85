#pragma once

#include <cagb/caching.hpp>
#include <cagb/coalition_engine.hpp>
#include <cagb/config.hpp>

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace cagb::harness {

/// Flat metrics table; every row has one cell per header column.
struct Table
{
	std::vector<std::string> header;
	std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> columns_for(Scenario s);

struct RunOptions
{
	int jobs = 1;
	bool timing = false; // append a wall_ms column (breaks byte-identical output)
};

/// Executes every cell of the experiment. Cells run concurrently up to
/// `jobs`; rows come back in cell order regardless of completion order.
Table run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

enum class Format
{
	csv,
	jsonl
};

/// RFC 4180: fields with commas, quotes or line breaks are quoted; lines end in CRLF.
std::string to_csv(const Table& table);
/// One JSON object per row, keys in header order; numeric and boolean cells
/// are written as JSON numbers and booleans.
std::string to_jsonl(const Table& table);
std::string render(const Table& table, Format format);

/// Writes through a sibling temp file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Everything a caching cell needs, derived from the cell seed.
struct CachingInstance
{
	topology::NetworkGraph graph;
	caching::ContentCatalog catalog;
	caching::DemandProfile demands;
	caching::CachingParams params;
	coalition::GameSpec game;
	coalition::Neighborhood neighborhood;
};

CachingInstance make_caching_instance(const CachingConfig& config, std::uint64_t seed);
std::uint64_t engine_seed(std::uint64_t seed, CachingOrder order);

/// Substitute for the engine in verify(); lets tests inject broken dynamics.
using EngineRunner = std::function<coalition::RunResult(const CachingInstance&, coalition::PreferenceOrder,
                                                        const CachingConfig&, std::uint64_t seed)>;

coalition::RunResult default_engine_runner(const CachingInstance& instance, coalition::PreferenceOrder order,
                                           const CachingConfig& config, std::uint64_t seed);

/// Runs the engine and the brute-force oracle for every (seed, order) of a
/// caching config. Returns 0 iff every run that ended stable lies in the
/// oracle set; counterexamples and witnessing moves go to `out`.
int verify(const ExperimentConfig& config, std::ostream& out, const EngineRunner& runner = default_engine_runner);

inline constexpr int kVerifyMaxPlayers = 7;

/// One run per value with `key` overridden; rows gain a leading sweep_value
/// column. Throws ConfigError for unknown keys or non-numeric values of
/// numeric keys.
Table sweep(const nlohmann::json& config, const std::string& key, const std::vector<std::string>& values,
            const RunOptions& options = {});

} // namespace cagb::harness
