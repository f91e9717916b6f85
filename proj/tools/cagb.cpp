#include <cagb/config.hpp>
#include <cagb/harness.hpp>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

namespace {

void configure_logging()
{
	spdlog::set_level(spdlog::level::err);
	const char* level = std::getenv("CAGB_LOG");
	if (!level)
	{
		return;
	}
	const std::string name(level);
	if (name == "info") spdlog::set_level(spdlog::level::info);
	else if (name == "debug") spdlog::set_level(spdlog::level::debug);
	else if (name != "error") spdlog::warn("ignoring unknown CAGB_LOG value '{}'", name);
}

cagb::harness::Format parse_format(const std::string& name)
{
	return name == "jsonl" ? cagb::harness::Format::jsonl : cagb::harness::Format::csv;
}

void emit(const std::string& content, const std::string& out_path)
{
	if (out_path.empty() || out_path == "-")
	{
		std::cout << content;
		return;
	}
	cagb::harness::write_atomic(out_path, content);
	spdlog::info("wrote {}", out_path);
}

} // namespace

int main(int argc, char** argv)
{
	configure_logging();

	CLI::App app{"Context-aware group buying: coalition formation simulations"};
	app.set_version_flag("--version", std::string("cagb ") + CAGB_VERSION);
	app.require_subcommand(1);

	std::string config_path;
	std::string out_path;
	std::string format = "csv";
	int jobs = 1;
	bool timing = false;

	auto* run = app.add_subcommand("run", "Run every cell of an experiment config");
	run->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
	run->add_option("--out", out_path, "Output path (default: config 'output' key, else stdout)");
	run->add_option("--jobs", jobs, "Concurrent cells")->check(CLI::PositiveNumber);
	run->add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
	run->add_flag("--timing", timing, "Append a wall_ms column");

	auto* verify = app.add_subcommand("verify", "Cross-check engine results against the brute-force oracle");
	verify->add_option("config", config_path, "Caching config with n_players <= 7")
	    ->required()
	    ->check(CLI::ExistingFile);

	std::string sweep_key;
	std::vector<std::string> sweep_values;
	auto* sweep = app.add_subcommand("sweep", "Repeat a run for each value of one config key");
	sweep->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
	sweep->add_option("--key", sweep_key, "Config key to vary")->required();
	sweep->add_option("--values", sweep_values, "Comma-separated values")->required()->delimiter(',');
	sweep->add_option("--out", out_path, "Output path (default: stdout)");
	sweep->add_option("--jobs", jobs, "Concurrent cells")->check(CLI::PositiveNumber);
	sweep->add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
	sweep->add_flag("--timing", timing, "Append a wall_ms column");

	CLI11_PARSE(app, argc, argv);

	try
	{
		const cagb::harness::RunOptions options{jobs, timing};
		if (*run)
		{
			const auto config = cagb::harness::load_config(config_path);
			if (out_path.empty() && config.output)
			{
				out_path = *config.output;
			}
			spdlog::info("running {} with {} seed(s), jobs={}", cagb::harness::to_string(config.scenario),
			             config.seeds.size(), jobs);
			const auto table = cagb::harness::run_experiment(config, options);
			emit(cagb::harness::render(table, parse_format(format)), out_path);
			return 0;
		}
		if (*verify)
		{
			const auto config = cagb::harness::load_config(config_path);
			return cagb::harness::verify(config, std::cout);
		}
		if (*sweep)
		{
			const auto doc = cagb::harness::read_json_file(config_path);
			const auto table = cagb::harness::sweep(doc, sweep_key, sweep_values, options);
			if (out_path.empty() && doc.contains("output"))
			{
				out_path = doc.at("output").get<std::string>();
			}
			emit(cagb::harness::render(table, parse_format(format)), out_path);
			return 0;
		}
	}
	catch (const cagb::harness::ConfigError& e)
	{
		std::cerr << "cagb: invalid config: " << e.what() << '\n';
		return 2;
	}
	catch (const std::exception& e)
	{
		std::cerr << "cagb: " << e.what() << '\n';
		return 1;
	}
	return 0;
}
