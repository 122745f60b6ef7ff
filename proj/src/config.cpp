#include "qmit/config.hpp"

#include "qmit/datasets.hpp"
#include "qmit/errors.hpp"
#include "qmit/rng.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace qmit
{

NoiseModel NoiseSection::model(int num_qubits) const
{
	NoiseModel m = NoiseModel::uniform(num_qubits, p1, p2, e01, e10);
	m.enabled = enabled;
	return m;
}

std::vector<Axis> RunConfig::feature_axes() const { return axes.empty() ? default_axes(model.kind) : axes; }

std::vector<std::string> RunConfig::states() const { return init_states.empty() ? all_basis_states(model.num_spins) : init_states; }

std::string RunConfig::plot_state() const
{
	if(!plot_init.empty()) { return plot_init; }
	const int n = model.num_spins;
	if(model.kind == ModelKind::TFIM) { return std::string(static_cast<std::size_t>(n), '0'); }
	// domain wall: left half up
	const int up = (n + 1) / 2;
	return std::string(static_cast<std::size_t>(up), '1') + std::string(static_cast<std::size_t>(n - up), '0');
}

TrainConfig RunConfig::train_config() const
{
	TrainConfig t = training;
	if(!training_seed_set) { t.seed = derive_seed(master_seed, {fnv1a64("train")}); }
	return t;
}

namespace
{

bool is_bitstring(const std::string& s, int n)
{
	return static_cast<int>(s.size()) == n && std::ranges::all_of(s, [](char ch) { return ch == '0' || ch == '1'; });
}

template <class F> void collect(std::vector<std::string>& errors, const std::string& field, F&& check)
{
	try
	{
		check();
	}
	catch(const std::exception& e)
	{
		errors.push_back(field + ": " + e.what());
	}
}

} // namespace

std::vector<std::string> validation_errors(const RunConfig& cfg)
{
	std::vector<std::string> errors;
	const int n = cfg.model.num_spins;
	if(n < 2 || n > kMaxQubits) { errors.push_back("model.Nq: must lie in [2, " + std::to_string(kMaxQubits) + "]"); }
	if(!std::isfinite(cfg.model.J)) { errors.push_back("model.J: must be finite"); }
	if(!std::isfinite(cfg.model.h)) { errors.push_back("model.h: must be finite"); }

	const auto& s = cfg.schedule;
	if(s.N1 < 1) { errors.push_back("schedule.N1: must be >= 1"); }
	if(s.c < 1) { errors.push_back("schedule.c: must be >= 1"); }
	if(!(s.T > 0.0) || !std::isfinite(s.T)) { errors.push_back("schedule.T: must be positive"); }
	if(s.K < 1) { errors.push_back("schedule.K: must be >= 1"); }
	if(!(std::abs(s.epsilon_angle) <= 1e-2)) { errors.push_back("schedule.epsilon_angle: magnitude must be <= 1e-2"); }
	if(s.N1 >= 1 && s.c >= 1)
	{
		if(s.layout == BlockLayout::Custom) { collect(errors, "schedule.custom_permutation", [&] { s.validate(); }); }
		else if(!s.custom_permutation.empty()) { errors.push_back("schedule.custom_permutation: only allowed with layout = custom"); }
	}

	auto prob = [&](double p, const char* field) {
		if(!(p >= 0.0 && p <= 1.0)) { errors.push_back(std::string(field) + ": must lie in [0, 1]"); }
	};
	prob(cfg.noise.p1, "noise.p1");
	prob(cfg.noise.p2, "noise.p2");
	prob(cfg.noise.e01, "noise.e01");
	prob(cfg.noise.e10, "noise.e10");
	if(cfg.noise.e01 + cfg.noise.e10 >= 1.0) { errors.push_back("noise.e01 + noise.e10: must be < 1 for an invertible readout"); }

	if(cfg.shots == 0 && !cfg.exact_mode) { errors.push_back("sampling.shots: must be positive unless exact_mode is set"); }
	if(cfg.workers == 0) { errors.push_back("sampling.workers: must be >= 1"); }
	{
		std::set<Axis> seen;
		for(const Axis a : cfg.axes)
		{
			if(!seen.insert(a).second) { errors.push_back(std::string("sampling.axes: duplicate axis ") + axis_char(a)); }
		}
		if(!cfg.axes.empty() && !seen.contains(Axis::Z)) { errors.push_back("sampling.axes: must include z (the training targets)"); }
	}

	const auto& t = cfg.training;
	if(t.checkpoint_every == 0) { errors.push_back("training.checkpoint_every: must be positive"); }
	else if(t.epochs < t.checkpoint_every) { errors.push_back("training.epochs: must be >= checkpoint_every"); }
	if(!(t.alpha > 0.0)) { errors.push_back("training.alpha: must be positive"); }
	if(!(t.beta1 >= 0.0 && t.beta1 < 1.0)) { errors.push_back("training.beta1: must lie in [0, 1)"); }
	if(!(t.beta2 >= 0.0 && t.beta2 < 1.0)) { errors.push_back("training.beta2: must lie in [0, 1)"); }
	if(!(t.epsilon_adam > 0.0)) { errors.push_back("training.epsilon_adam: must be positive"); }
	if(!(t.validation_fraction >= 0.0 && t.validation_fraction <= 0.5)) { errors.push_back("training.validation_fraction: must lie in [0, 0.5]"); }
	if(t.hidden.empty() || std::ranges::any_of(t.hidden, [](int h) { return h < 1; }))
	{
		errors.push_back("training.hidden: needs at least one positive width");
	}

	if(cfg.post_select)
	{
		if(cfg.model.kind != ModelKind::XY) { errors.push_back("post_select.enabled: only the xy chain conserves excitation number"); }
		if(cfg.post_select_target < -1 || cfg.post_select_target > n) { errors.push_back("post_select.target: must be auto or in [0, Nq]"); }
	}

	std::set<std::string> unique;
	for(const auto& st : cfg.init_states)
	{
		if(!is_bitstring(st, n)) { errors.push_back("states.init: '" + st + "' is not a " + std::to_string(n) + "-bit string"); }
		else if(!unique.insert(st).second) { errors.push_back("states.init: duplicate state " + st); }
	}
	if(!cfg.plot_init.empty() && !is_bitstring(cfg.plot_init, n))
	{
		errors.push_back("output.plot_init: '" + cfg.plot_init + "' is not a " + std::to_string(n) + "-bit string");
	}
	if(cfg.output_dir.empty()) { errors.push_back("output.directory: must not be empty"); }
	return errors;
}

void validate(const RunConfig& cfg)
{
	const auto errors = validation_errors(cfg);
	if(errors.empty()) { return; }
	std::string msg = "invalid configuration:";
	for(const auto& e : errors) { msg += "\n  " + e; }
	throw ConfigError(msg);
}

namespace
{

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys()
{
	static const std::map<std::string, std::set<std::string>> keys{
	    {"model", {"kind", "Nq", "J", "h"}},
	    {"schedule", {"N1", "c", "T", "K", "layout", "epsilon_angle", "custom_permutation"}},
	    {"noise", {"p1", "p2", "e01", "e10", "enabled"}},
	    {"sampling", {"shots", "exact_mode", "workers", "axes"}},
	    {"training",
	     {"hidden", "epochs", "checkpoint_every", "alpha", "beta1", "beta2", "epsilon_adam", "batch_size", "seed", "validation_fraction"}},
	    {"post_select", {"enabled", "target"}},
	    {"seeds", {"master"}},
	    {"output", {"directory", "plot_init"}},
	    {"states", {"init"}},
	};
	return keys;
}

std::string trim(std::string_view s)
{
	const auto b = s.find_first_not_of(" \t\r\n");
	if(b == std::string_view::npos) { return {}; }
	const auto e = s.find_last_not_of(" \t\r\n");
	return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s)
{
	std::vector<std::string> out;
	std::string cur;
	for(const char ch : s)
	{
		if(ch == ',' || ch == ' ' || ch == '\t')
		{
			if(!cur.empty()) { out.push_back(cur); }
			cur.clear();
		}
		else { cur += ch; }
	}
	if(!cur.empty()) { out.push_back(cur); }
	return out;
}

template <class T> T parse_number(const std::string& s)
{
	T v{};
	const auto* end = s.data() + s.size();
	const auto [p, ec] = std::from_chars(s.data(), end, v);
	if(ec != std::errc{} || p != end) { throw std::invalid_argument("'" + s + "' is not a valid number"); }
	return v;
}

bool parse_bool(const std::string& s)
{
	std::string l = s;
	std::ranges::transform(l, l.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
	if(l == "true" || l == "yes" || l == "on" || l == "1") { return true; }
	if(l == "false" || l == "no" || l == "off" || l == "0") { return false; }
	throw std::invalid_argument("'" + s + "' is not a boolean");
}

class Reader
{
public:
	explicit Reader(const pt::ptree& tree) : tree_{tree} {}

	template <class F> void field(const std::string& section, const std::string& key, F&& apply)
	{
		const auto sec = tree_.get_child_optional(section);
		if(!sec) { return; }
		const auto val = sec->get_optional<std::string>(key);
		if(!val) { return; }
		try
		{
			apply(trim(*val));
		}
		catch(const std::exception& e)
		{
			errors.push_back(section + "." + key + ": " + e.what());
		}
	}

	[[nodiscard]] bool has(const std::string& section, const std::string& key) const
	{
		const auto sec = tree_.get_child_optional(section);
		return sec && sec->get_optional<std::string>(key);
	}

	std::vector<std::string> errors;

private:
	const pt::ptree& tree_;
};

} // namespace

RunConfig parse_config(std::string_view text, const std::string& source_name)
{
	pt::ptree tree;
	try
	{
		std::istringstream in{std::string(text)};
		pt::ini_parser::read_ini(in, tree);
	}
	catch(const pt::ini_parser_error& e)
	{
		throw ConfigError(source_name + ":" + std::to_string(e.line()) + ": " + e.message());
	}

	Reader rd{tree};
	const auto& known = known_keys();
	for(const auto& [section, body] : tree)
	{
		const auto it = known.find(section);
		if(it == known.end())
		{
			rd.errors.push_back(section + ": unknown section");
			continue;
		}
		for(const auto& [key, value] : body)
		{
			if(!it->second.contains(key)) { rd.errors.push_back(section + "." + key + ": unknown key"); }
		}
	}

	RunConfig cfg;
	rd.field("model", "kind", [&](const std::string& v) { cfg.model.kind = model_kind_from_name(v); });
	rd.field("model", "Nq", [&](const std::string& v) { cfg.model.num_spins = parse_number<int>(v); });
	rd.field("model", "J", [&](const std::string& v) { cfg.model.J = parse_number<double>(v); });
	rd.field("model", "h", [&](const std::string& v) { cfg.model.h = parse_number<double>(v); });

	cfg.schedule.T = cfg.model.J != 0.0 ? 2.0 / cfg.model.J : 0.0;
	rd.field("schedule", "N1", [&](const std::string& v) { cfg.schedule.N1 = parse_number<int>(v); });
	rd.field("schedule", "c", [&](const std::string& v) { cfg.schedule.c = parse_number<int>(v); });
	rd.field("schedule", "T", [&](const std::string& v) { cfg.schedule.T = parse_number<double>(v); });
	rd.field("schedule", "K", [&](const std::string& v) { cfg.schedule.K = parse_number<int>(v); });
	rd.field("schedule", "layout", [&](const std::string& v) { cfg.schedule.layout = layout_from_name(v); });
	rd.field("schedule", "epsilon_angle", [&](const std::string& v) { cfg.schedule.epsilon_angle = parse_number<double>(v); });
	rd.field("schedule", "custom_permutation", [&](const std::string& v) {
		for(const auto& item : split_list(v)) { cfg.schedule.custom_permutation.push_back(parse_number<int>(item)); }
	});

	rd.field("noise", "p1", [&](const std::string& v) { cfg.noise.p1 = parse_number<double>(v); });
	rd.field("noise", "p2", [&](const std::string& v) { cfg.noise.p2 = parse_number<double>(v); });
	rd.field("noise", "e01", [&](const std::string& v) { cfg.noise.e01 = parse_number<double>(v); });
	rd.field("noise", "e10", [&](const std::string& v) { cfg.noise.e10 = parse_number<double>(v); });
	rd.field("noise", "enabled", [&](const std::string& v) { cfg.noise.enabled = parse_bool(v); });

	rd.field("sampling", "shots", [&](const std::string& v) { cfg.shots = parse_number<std::uint64_t>(v); });
	rd.field("sampling", "exact_mode", [&](const std::string& v) { cfg.exact_mode = parse_bool(v); });
	rd.field("sampling", "workers", [&](const std::string& v) { cfg.workers = parse_number<unsigned>(v); });
	rd.field("sampling", "axes", [&](const std::string& v) {
		for(const char ch : v)
		{
			if(ch == ',' || ch == ' ') { continue; }
			cfg.axes.push_back(axis_from_char(ch));
		}
	});

	auto& t = cfg.training;
	rd.field("training", "hidden", [&](const std::string& v) {
		t.hidden.clear();
		for(const auto& item : split_list(v)) { t.hidden.push_back(parse_number<int>(item)); }
	});
	rd.field("training", "epochs", [&](const std::string& v) { t.epochs = parse_number<std::size_t>(v); });
	rd.field("training", "checkpoint_every", [&](const std::string& v) { t.checkpoint_every = parse_number<std::size_t>(v); });
	rd.field("training", "alpha", [&](const std::string& v) { t.alpha = parse_number<double>(v); });
	rd.field("training", "beta1", [&](const std::string& v) { t.beta1 = parse_number<double>(v); });
	rd.field("training", "beta2", [&](const std::string& v) { t.beta2 = parse_number<double>(v); });
	rd.field("training", "epsilon_adam", [&](const std::string& v) { t.epsilon_adam = parse_number<double>(v); });
	rd.field("training", "batch_size", [&](const std::string& v) { t.batch_size = parse_number<std::size_t>(v); });
	rd.field("training", "validation_fraction", [&](const std::string& v) { t.validation_fraction = parse_number<double>(v); });
	rd.field("training", "seed", [&](const std::string& v) {
		t.seed = parse_number<std::uint64_t>(v);
		cfg.training_seed_set = true;
	});

	rd.field("post_select", "enabled", [&](const std::string& v) { cfg.post_select = parse_bool(v); });
	rd.field("post_select", "target", [&](const std::string& v) { cfg.post_select_target = v == "auto" ? -1 : parse_number<int>(v); });

	rd.field("seeds", "master", [&](const std::string& v) { cfg.master_seed = parse_number<std::uint64_t>(v); });

	rd.field("output", "directory", [&](const std::string& v) { cfg.output_dir = v; });
	rd.field("output", "plot_init", [&](const std::string& v) { cfg.plot_init = v; });

	rd.field("states", "init", [&](const std::string& v) {
		if(v != "all") { cfg.init_states = split_list(v); }
	});

	auto errors = std::move(rd.errors);
	for(auto& e : validation_errors(cfg))
	{
		// values that failed to parse are still at their defaults; report them once
		if(std::ranges::none_of(errors, [&](const std::string& prior) { return prior.substr(0, prior.find(':')) == e.substr(0, e.find(':')); }))
		{
			errors.push_back(std::move(e));
		}
	}
	if(!errors.empty())
	{
		std::string msg = source_name + ": invalid configuration:";
		for(const auto& e : errors) { msg += "\n  " + e; }
		throw ConfigError(msg);
	}
	return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
	std::ifstream in(path, std::ios::binary);
	if(!in) { throw ConfigError("cannot open config file " + path.string()); }
	std::ostringstream buf;
	buf << in.rdbuf();
	return parse_config(buf.str(), path.string());
}

namespace
{

// shortest text that reads back to the same double
std::string fmt(double v)
{
	std::array<char, 32> buf{};
	const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
	return std::string(buf.data(), end);
}

std::string join_ints(const std::vector<int>& v)
{
	std::string out;
	for(std::size_t i = 0; i < v.size(); ++i) { out += (i ? "," : "") + std::to_string(v[i]); }
	return out;
}

std::string axes_string(const std::vector<Axis>& axes)
{
	std::string s;
	for(const Axis a : axes) { s += axis_char(a); }
	return s;
}

std::string hex16(std::uint64_t h)
{
	std::ostringstream s;
	s << std::hex << std::setw(16) << std::setfill('0') << h;
	return s.str();
}

} // namespace

std::string config_to_ini(const RunConfig& cfg)
{
	std::ostringstream o;
	o << "[model]\nkind = " << model_kind_name(cfg.model.kind) << "\nNq = " << cfg.model.num_spins << "\nJ = " << fmt(cfg.model.J)
	  << "\nh = " << fmt(cfg.model.h) << "\n\n";
	o << "[schedule]\nN1 = " << cfg.schedule.N1 << "\nc = " << cfg.schedule.c << "\nT = " << fmt(cfg.schedule.T) << "\nK = " << cfg.schedule.K
	  << "\nlayout = " << layout_name(cfg.schedule.layout) << "\nepsilon_angle = " << fmt(cfg.schedule.epsilon_angle) << "\n";
	if(!cfg.schedule.custom_permutation.empty()) { o << "custom_permutation = " << join_ints(cfg.schedule.custom_permutation) << "\n"; }
	o << "\n[noise]\np1 = " << fmt(cfg.noise.p1) << "\np2 = " << fmt(cfg.noise.p2) << "\ne01 = " << fmt(cfg.noise.e01)
	  << "\ne10 = " << fmt(cfg.noise.e10) << "\nenabled = " << (cfg.noise.enabled ? "true" : "false") << "\n\n";
	o << "[sampling]\nshots = " << cfg.shots << "\nexact_mode = " << (cfg.exact_mode ? "true" : "false") << "\nworkers = " << cfg.workers
	  << "\naxes = " << axes_string(cfg.feature_axes()) << "\n\n";
	const auto& t = cfg.training;
	o << "[training]\nhidden = " << join_ints(t.hidden) << "\nepochs = " << t.epochs << "\ncheckpoint_every = " << t.checkpoint_every
	  << "\nalpha = " << fmt(t.alpha) << "\nbeta1 = " << fmt(t.beta1) << "\nbeta2 = " << fmt(t.beta2) << "\nepsilon_adam = " << fmt(t.epsilon_adam)
	  << "\nbatch_size = " << t.batch_size << "\nvalidation_fraction = " << fmt(t.validation_fraction) << "\n";
	if(cfg.training_seed_set) { o << "seed = " << t.seed << "\n"; }
	o << "\n[post_select]\nenabled = " << (cfg.post_select ? "true" : "false")
	  << "\ntarget = " << (cfg.post_select_target < 0 ? std::string("auto") : std::to_string(cfg.post_select_target)) << "\n\n";
	o << "[seeds]\nmaster = " << cfg.master_seed << "\n\n";
	o << "[output]\ndirectory = " << cfg.output_dir.string() << "\n";
	if(!cfg.plot_init.empty()) { o << "plot_init = " << cfg.plot_init << "\n"; }
	o << "\n[states]\ninit = ";
	if(cfg.init_states.empty()) { o << "all"; }
	for(std::size_t i = 0; i < cfg.init_states.size(); ++i) { o << (i ? "," : "") << cfg.init_states[i]; }
	o << "\n";
	return o.str();
}

nlohmann::json canonical_json(const RunConfig& cfg)
{
	nlohmann::json j;
	j["model"] = {{"kind", model_kind_name(cfg.model.kind)}, {"Nq", cfg.model.num_spins}, {"J", cfg.model.J}, {"h", cfg.model.h}};
	j["schedule"] = {{"N1", cfg.schedule.N1},
	                 {"c", cfg.schedule.c},
	                 {"T", cfg.schedule.T},
	                 {"K", cfg.schedule.K},
	                 {"layout", layout_name(cfg.schedule.layout)},
	                 {"custom_permutation", cfg.schedule.custom_permutation},
	                 {"epsilon_angle", cfg.schedule.epsilon_angle}};
	j["noise"] = {{"p1", cfg.noise.p1}, {"p2", cfg.noise.p2}, {"e01", cfg.noise.e01}, {"e10", cfg.noise.e10}, {"enabled", cfg.noise.enabled}};
	j["sampling"] = {{"shots", cfg.shots}, {"exact_mode", cfg.exact_mode}, {"axes", axes_string(cfg.feature_axes())}};
	j["training"] = cfg.train_config().to_json();
	j["post_select"] = {{"enabled", cfg.post_select}, {"target", cfg.post_select_target}};
	j["seeds"] = {{"master", cfg.master_seed}};
	j["states"] = cfg.states();
	j["plot_init"] = cfg.plot_state();
	return j;
}

std::string config_hash(const RunConfig& cfg) { return hex16(fnv1a64(canonical_json(cfg).dump())); }

std::string lineage_hash(const RunConfig& cfg)
{
	const auto j = canonical_json(cfg);
	const nlohmann::json lineage = {{"model", j["model"]}, {"schedule", j["schedule"]}};
	return hex16(fnv1a64(lineage.dump()));
}

} // namespace qmit
