#include "qmit/pipeline.hpp"

#include "qmit/errors.hpp"
#include "qmit/log.hpp"
#include "qmit/mitigator.hpp"

#include <fstream>
#include <sstream>

namespace qmit
{

void write_text(const fs::path& path, const std::string& text)
{
	if(path.has_parent_path()) { fs::create_directories(path.parent_path()); }
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	if(!out) { throw std::runtime_error("cannot open " + path.string() + " for writing"); }
	out << text;
}

std::string dataset_file_name(Role role) { return std::string(role_name(role)) + ".jsonl"; }

namespace
{

std::string read_text(const fs::path& path)
{
	std::ifstream in(path, std::ios::binary);
	if(!in) { throw ParseError(path.string(), 0, "cannot open file"); }
	std::ostringstream buf;
	buf << in.rdbuf();
	return buf.str();
}

std::string with_hash_comment(const std::string& hash, const std::string& csv) { return "# config_hash " + hash + "\n" + csv; }

void require_same_lineage(const std::string& a, const std::string& b, const fs::path& pa, const fs::path& pb, bool force)
{
	if(a == b) { return; }
	if(force)
	{
		log_warning("comparing " + pa.string() + " and " + pb.string() + " across lineages " + a + " / " + b);
		return;
	}
	throw AlignmentError(pa.string() + " (lineage " + a + ") and " + pb.string() + " (lineage " + b +
	                     ") come from different model/schedule settings; use --force to compare anyway");
}

// Curve for the plot state: mean z-magnetization on tfim, half-difference on xy.
Curve plot_curve(const RunConfig& cfg, const ObservationDataset& ds)
{
	const std::string init = cfg.plot_state();
	if(ds.meta.model.kind == ModelKind::XY && popcount_bits(init) != 0 && popcount_bits(init) != static_cast<int>(init.size()))
	{
		return half_difference(ds, init);
	}
	return mean_magnetization(ds, init, Axis::Z);
}

nlohmann::json report_meta(const RunConfig& cfg)
{
	return {{"config_hash", config_hash(cfg)},
	        {"lineage_hash", lineage_hash(cfg)},
	        {"plot_init", cfg.plot_state()},
	        {"training_epochs", cfg.training.epochs},
	        {"training_epochs_default", TrainConfig{}.epochs}};
}

} // namespace

fs::path cmd_generate(const RunConfig& cfg, Stage stage)
{
	validate(cfg);
	GenerateOptions opt;
	opt.axes = cfg.feature_axes();
	opt.exact_mode = cfg.exact_mode;
	opt.workers = cfg.workers;
	opt.config_hash = config_hash(cfg);
	opt.lineage_hash = lineage_hash(cfg);
	// only the shallow targets are filtered; inputs keep every shot
	if(cfg.post_select && stage == Stage::QuasiIdeal) { opt.post_select = cfg.post_select_target; }

	const NoiseModel noise = cfg.noise.model(cfg.model.num_spins);
	const auto ds = generate(cfg.model, cfg.schedule, stage, noise, cfg.shots, cfg.states(), cfg.master_seed, opt);
	const fs::path path = cfg.output_dir / dataset_file_name(role_of(stage));
	save(ds, path);
	log_info("wrote " + path.string() + " (" + std::to_string(ds.records.size()) + " records)");
	return path;
}

fs::path cmd_train(const RunConfig& cfg, const fs::path& noisy, const fs::path& quasi_ideal)
{
	validate(cfg);
	const auto ds_noisy = load_dataset(noisy);
	const auto ds_quasi = load_dataset(quasi_ideal);
	require_same_lineage(ds_noisy.meta.lineage_hash, ds_quasi.meta.lineage_hash, noisy, quasi_ideal, false);

	const auto pairs = pair_for_training(ds_noisy, ds_quasi);
	const TrainConfig tc = cfg.train_config();
	const auto result = train(pairs, tc);
	log_info("best validation loss " + std::to_string(result.best_validation_loss) + " at epoch " + std::to_string(result.best_epoch));

	Checkpoint cp = make_checkpoint(result, tc);
	cp.config_hash = config_hash(cfg);
	cp.lineage_hash = ds_noisy.meta.lineage_hash;
	const fs::path path = cfg.output_dir / "checkpoint.json";
	save_checkpoint(cp, path);
	write_text(cfg.output_dir / "loss_log.csv", with_hash_comment(cp.config_hash, loss_log_csv(result.log)));
	log_info("wrote " + path.string());
	return path;
}

fs::path cmd_mitigate(const RunConfig& cfg, const fs::path& checkpoint, const fs::path& eval_noisy)
{
	validate(cfg);
	const Checkpoint cp = load_checkpoint(checkpoint);
	const auto noisy = load_dataset(eval_noisy);
	require_same_lineage(cp.lineage_hash, noisy.meta.lineage_hash, checkpoint, eval_noisy, false);
	auto ds = mitigate(cp.model, noisy);
	ds.meta.config_hash = config_hash(cfg);
	const fs::path path = cfg.output_dir / dataset_file_name(Role::Mitigated);
	save(ds, path);
	log_info("wrote " + path.string());
	return path;
}

std::vector<fs::path> cmd_reference(const RunConfig& cfg)
{
	validate(cfg);
	std::vector<fs::path> out;
	for(const Role role : {Role::Exact, Role::IdealTrotter})
	{
		auto ds = reference_dataset(cfg.model, cfg.schedule, role, cfg.schedule.N2(), cfg.states(), cfg.feature_axes());
		ds.meta.config_hash = config_hash(cfg);
		ds.meta.lineage_hash = lineage_hash(cfg);
		const fs::path path = cfg.output_dir / dataset_file_name(role);
		save(ds, path);
		out.push_back(path);

		const fs::path curve_path = cfg.output_dir / (std::string(role_name(role)) + "_curve.csv");
		write_text(curve_path, with_hash_comment(ds.meta.config_hash, curve_to_csv(plot_curve(cfg, ds))));
		out.push_back(curve_path);
	}
	return out;
}

std::vector<fs::path> cmd_evaluate(const RunConfig& cfg, const std::vector<std::pair<fs::path, fs::path>>& pairs, bool force)
{
	validate(cfg);
	if(pairs.empty()) { throw ConfigError("evaluate needs at least one pair of dataset files"); }
	std::vector<fs::path> out;
	for(const auto& [pa, pb] : pairs)
	{
		const auto a = load_dataset(pa);
		const auto b = load_dataset(pb);
		require_same_lineage(a.meta.lineage_hash, b.meta.lineage_hash, pa, pb, force);

		std::vector<Axis> axes;
		for(const Axis x : a.meta.axes)
		{
			if(std::ranges::find(b.meta.axes, x) != b.meta.axes.end()) { axes.push_back(x); }
		}
		if(axes.empty()) { throw AlignmentError(pa.string() + " and " + pb.string() + " share no measured axis"); }

		MetricReport r = compare(a, b, axes);
		for(const Axis x : axes) { r.curves.push_back(mse_curve(a, b, x)); }
		r.meta = report_meta(cfg);
		r.meta["a_file"] = pa.filename().string();
		r.meta["b_file"] = pb.filename().string();
		r.meta["a_trotter_blocks"] = a.meta.trotter_blocks;
		r.meta["b_trotter_blocks"] = b.meta.trotter_blocks;

		const fs::path path = cfg.output_dir / ("report_" + r.label_a + "_vs_" + r.label_b + ".json");
		write_text(path, report_to_json(r).dump(1) + "\n");
		log_info(r.label_a + " vs " + r.label_b + ": overall " + std::to_string(r.overall));
		out.push_back(path);
	}
	return out;
}

fs::path cmd_deviation(const RunConfig& cfg, const fs::path& improved, const fs::path& ideal_trotter, const fs::path& exact, bool force)
{
	validate(cfg);
	const auto di = load_dataset(improved);
	const auto dt = load_dataset(ideal_trotter);
	const auto de = load_dataset(exact);
	require_same_lineage(di.meta.lineage_hash, dt.meta.lineage_hash, improved, ideal_trotter, force);
	require_same_lineage(di.meta.lineage_hash, de.meta.lineage_hash, improved, exact, force);

	const Curve ci = plot_curve(cfg, di), ct = plot_curve(cfg, dt), ce = plot_curve(cfg, de);
	const auto dev = deviation_curves(ci, ct, ce);

	MetricReport r;
	r.label_a = role_name(di.meta.role);
	r.label_b = "references";
	r.overall = 0.0;
	for(const double v : dev.vs_exact.value) { r.overall = std::max(r.overall, std::abs(v)); }
	r.curves = {ci, ct, ce, dev.vs_trotter, dev.vs_exact};
	r.meta = report_meta(cfg);
	r.meta["observable"] = ci.name.ends_with("half_difference") ? "half_difference" : "mean_z";
	r.meta["overall_is"] = "max |delta_exact|";

	const fs::path path = cfg.output_dir / ("deviation_" + r.label_a + ".json");
	write_text(path, report_to_json(r).dump(1) + "\n");
	return path;
}

std::vector<fs::path> cmd_export(const RunConfig& cfg, const std::vector<fs::path>& inputs, const std::string& format)
{
	if(format != "csv" && format != "svg") { throw ConfigError("export format must be csv or svg, got '" + format + "'"); }
	if(inputs.empty()) { throw ConfigError("export needs at least one input file"); }
	const std::string hash = config_hash(cfg);

	std::vector<fs::path> out;
	std::vector<Curve> dataset_curves;
	std::string chart_stem;
	for(const auto& in : inputs)
	{
		const std::string text = read_text(in);
		// a report is one JSON document; a dataset is JSON lines
		const auto whole = nlohmann::json::parse(text, nullptr, false);
		const std::string stem = in.stem().string();

		if(!whole.is_discarded() && whole.is_object() && whole.value("format", std::string{}) == "qmit-report")
		{
			const auto r = report_from_json(whole);
			if(format == "csv")
			{
				for(const auto& c : r.curves)
				{
					const fs::path p = cfg.output_dir / (stem + "_" + c.name + ".csv");
					write_text(p, with_hash_comment(hash, curve_to_csv(c)));
					out.push_back(p);
				}
			}
			else
			{
				const fs::path p = cfg.output_dir / (stem + ".svg");
				write_text(p, "<!-- config_hash " + hash + " -->\n" + curves_to_svg(r.curves, r.label_a + " vs " + r.label_b));
				out.push_back(p);
			}
			continue;
		}

		const auto ds = dataset_from_jsonl(text, in.string());
		if(format == "csv")
		{
			const fs::path p = cfg.output_dir / (stem + ".csv");
			write_text(p, with_hash_comment(hash, to_csv(ds)));
			out.push_back(p);
		}
		else
		{
			Curve c = plot_curve(cfg, ds);
			c.name = role_name(ds.meta.role);
			dataset_curves.push_back(std::move(c));
			chart_stem += (chart_stem.empty() ? "" : "+") + stem;
		}
	}
	if(!dataset_curves.empty())
	{
		const fs::path p = cfg.output_dir / (chart_stem + "_" + cfg.plot_state() + ".svg");
		write_text(p, "<!-- config_hash " + hash + " -->\n" + curves_to_svg(dataset_curves, "initial state " + cfg.plot_state()));
		out.push_back(p);
	}
	return out;
}

PipelineSummary cmd_pipeline(const RunConfig& cfg)
{
	validate(cfg);
	PipelineSummary s;
	auto keep = [&](const fs::path& p) {
		s.artifacts.push_back(p);
		return p;
	};
	const fs::path quasi = keep(cmd_generate(cfg, Stage::QuasiIdeal));
	const fs::path noisy = keep(cmd_generate(cfg, Stage::TrainingNoisy));
	const fs::path eval = keep(cmd_generate(cfg, Stage::EvalNoisy));
	for(const auto& p : cmd_reference(cfg)) { keep(p); }
	const fs::path exact = cfg.output_dir / dataset_file_name(Role::Exact);
	const fs::path trotter = cfg.output_dir / dataset_file_name(Role::IdealTrotter);

	const fs::path cp = keep(cmd_train(cfg, noisy, quasi));
	keep(cfg.output_dir / "loss_log.csv");
	const fs::path mitigated = keep(cmd_mitigate(cfg, cp, eval));

	const auto reports = cmd_evaluate(cfg, {{eval, trotter}, {mitigated, trotter}, {eval, exact}, {mitigated, exact}}, false);
	for(const auto& p : reports) { keep(p); }
	const fs::path dev = keep(cmd_deviation(cfg, mitigated, trotter, exact, false));

	for(const auto& p : cmd_export(cfg, {dev}, "svg")) { keep(p); }
	for(const auto& p : cmd_export(cfg, {eval, mitigated, trotter, exact}, "svg")) { keep(p); }

	s.raw_mse = report_from_json(nlohmann::json::parse(read_text(reports[0]))).per_axis.at('z');
	s.mitigated_mse = report_from_json(nlohmann::json::parse(read_text(reports[1]))).per_axis.at('z');
	log_info("raw mse (z) " + std::to_string(s.raw_mse) + ", mitigated mse (z) " + std::to_string(s.mitigated_mse));
	return s;
}

} // namespace qmit
