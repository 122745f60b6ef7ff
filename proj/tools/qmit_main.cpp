// qmit: command-line front end for dataset generation, training, mitigation
// and evaluation. Exit codes: 0 ok, 2 config error, 3 data error,
// 4 training divergence.

#include "qmit/config.hpp"
#include "qmit/errors.hpp"
#include "qmit/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace
{

struct Common
{
	std::string config;
	std::optional<std::uint64_t> seed;
	std::string out;
	bool exact_mode = false;
	std::optional<std::string> post_select;
};

void add_common(CLI::App* cmd, Common& c)
{
	cmd->add_option("--config", c.config, "INI run configuration")->required()->check(CLI::ExistingFile);
	cmd->add_option("--seed", c.seed, "override the master seed");
	cmd->add_option("--out", c.out, "override the output directory");
	cmd->add_flag("--exact-mode", c.exact_mode, "use exact expectations instead of sampled shots");
	cmd->add_option("--post-select", c.post_select, "post-select quasi-ideal data on N excitations (or 'auto')");
}

qmit::RunConfig resolve(const Common& c)
{
	qmit::RunConfig cfg = qmit::load_config(c.config);
	if(c.seed) { cfg.master_seed = *c.seed; }
	if(!c.out.empty()) { cfg.output_dir = c.out; }
	if(c.exact_mode) { cfg.exact_mode = true; }
	if(c.post_select)
	{
		cfg.post_select = true;
		if(*c.post_select == "auto") { cfg.post_select_target = -1; }
		else
		{
			try
			{
				cfg.post_select_target = std::stoi(*c.post_select);
			}
			catch(const std::exception&)
			{
				throw qmit::ConfigError("--post-select: expected an integer or 'auto', got '" + *c.post_select + "'");
			}
		}
	}
	qmit::validate(cfg);
	return cfg;
}

void print_paths(const std::vector<std::filesystem::path>& paths)
{
	for(const auto& p : paths) { std::cout << p.string() << '\n'; }
}

int run(int argc, char** argv)
{
	CLI::App app{"qmit: neural-network error mitigation for Trotterized spin-chain dynamics"};
	app.require_subcommand(1);

	Common common;

	auto* gen = app.add_subcommand("generate", "simulate one dataset stage (or all three)");
	add_common(gen, common);
	std::string stage = "all";
	gen->add_option("--stage", stage, "quasi-ideal | training-noisy | eval-noisy | all");

	auto* trn = app.add_subcommand("train", "fit the network on training_noisy -> quasi_ideal pairs");
	add_common(trn, common);
	std::string noisy_file, quasi_file;
	trn->add_option("--noisy", noisy_file, "training_noisy dataset (default: <out>/training_noisy.jsonl)");
	trn->add_option("--quasi", quasi_file, "quasi_ideal dataset (default: <out>/quasi_ideal.jsonl)");

	auto* mit = app.add_subcommand("mitigate", "apply a trained checkpoint to eval_noisy data");
	add_common(mit, common);
	std::string checkpoint_file, eval_file;
	mit->add_option("--checkpoint", checkpoint_file, "checkpoint (default: <out>/checkpoint.json)");
	mit->add_option("--eval", eval_file, "eval_noisy dataset (default: <out>/eval_noisy.jsonl)");

	auto* evl = app.add_subcommand("evaluate", "write metric reports for dataset pairs");
	add_common(evl, common);
	std::vector<std::pair<std::string, std::string>> pairs;
	std::vector<std::string> deviation;
	bool force = false;
	evl->add_option("--pair", pairs, "A B: compare dataset A against B (repeatable)");
	evl->add_option("--deviation", deviation, "IMPROVED TROTTER EXACT: deviation curves for the plot state")->expected(3);
	evl->add_flag("--force", force, "compare artifacts from different model/schedule settings");

	auto* ref = app.add_subcommand("reference", "exact and ideal-Trotter reference datasets");
	add_common(ref, common);

	auto* exp = app.add_subcommand("export", "CSV or SVG artifacts from datasets and reports");
	add_common(exp, common);
	std::string format = "csv";
	std::vector<std::string> inputs;
	exp->add_option("--format", format, "csv | svg")->check(CLI::IsMember({"csv", "svg"}));
	exp->add_option("--in", inputs, "dataset or report files")->required();

	auto* pip = app.add_subcommand("pipeline", "generate, reference, train, mitigate, evaluate and export");
	add_common(pip, common);

	auto* def = app.add_subcommand("default-config", "print the default configuration");

	try
	{
		app.parse(argc, argv);
	}
	catch(const CLI::CallForHelp& e)
	{
		return app.exit(e);
	}
	catch(const CLI::ParseError& e)
	{
		app.exit(e);
		return 2;
	}

	if(def->parsed())
	{
		std::cout << qmit::config_to_ini(qmit::RunConfig{});
		return 0;
	}

	const qmit::RunConfig cfg = resolve(common);
	const auto& out = cfg.output_dir;
	auto or_default = [&](const std::string& given, qmit::Role role) {
		return given.empty() ? out / qmit::dataset_file_name(role) : std::filesystem::path(given);
	};

	if(gen->parsed())
	{
		if(stage == "all")
		{
			for(const auto s : {qmit::Stage::QuasiIdeal, qmit::Stage::TrainingNoisy, qmit::Stage::EvalNoisy})
			{
				std::cout << qmit::cmd_generate(cfg, s).string() << '\n';
			}
		}
		else
		{
			qmit::Stage s{};
			try
			{
				s = qmit::stage_from_name(stage);
			}
			catch(const std::exception& e)
			{
				throw qmit::ConfigError(std::string("--stage: ") + e.what());
			}
			std::cout << qmit::cmd_generate(cfg, s).string() << '\n';
		}
	}
	else if(trn->parsed())
	{
		std::cout << qmit::cmd_train(cfg, or_default(noisy_file, qmit::Role::TrainingNoisy), or_default(quasi_file, qmit::Role::QuasiIdeal)).string()
		          << '\n';
	}
	else if(mit->parsed())
	{
		const std::filesystem::path cp = checkpoint_file.empty() ? out / "checkpoint.json" : std::filesystem::path(checkpoint_file);
		std::cout << qmit::cmd_mitigate(cfg, cp, or_default(eval_file, qmit::Role::EvalNoisy)).string() << '\n';
	}
	else if(evl->parsed())
	{
		if(pairs.empty() && deviation.empty()) { throw qmit::ConfigError("evaluate: give --pair and/or --deviation"); }
		if(!pairs.empty())
		{
			std::vector<std::pair<std::filesystem::path, std::filesystem::path>> p;
			for(const auto& [a, b] : pairs) { p.emplace_back(a, b); }
			print_paths(qmit::cmd_evaluate(cfg, p, force));
		}
		if(!deviation.empty()) { std::cout << qmit::cmd_deviation(cfg, deviation[0], deviation[1], deviation[2], force).string() << '\n'; }
	}
	else if(ref->parsed()) { print_paths(qmit::cmd_reference(cfg)); }
	else if(exp->parsed())
	{
		std::vector<std::filesystem::path> in(inputs.begin(), inputs.end());
		print_paths(qmit::cmd_export(cfg, in, format));
	}
	else if(pip->parsed())
	{
		const auto summary = qmit::cmd_pipeline(cfg);
		print_paths(summary.artifacts);
		std::cout << "raw_mse_z " << summary.raw_mse << "\nmitigated_mse_z " << summary.mitigated_mse << '\n';
	}
	return 0;
}

} // namespace

int main(int argc, char** argv)
{
	try
	{
		return run(argc, argv);
	}
	catch(const qmit::ConfigError& e)
	{
		std::cerr << "config error: " << e.what() << '\n';
		return 2;
	}
	catch(const qmit::TrainingDivergence& e)
	{
		std::cerr << "training diverged: " << e.what() << '\n';
		return 4;
	}
	catch(const std::exception& e)
	{
		std::cerr << "error: " << e.what() << '\n';
		return 3;
	}
}
