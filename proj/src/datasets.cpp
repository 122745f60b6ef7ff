#include "qmit/datasets.hpp"

#include "qmit/errors.hpp"
#include "qmit/log.hpp"
#include "qmit/rng.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace qmit
{

std::string_view role_name(Role r)
{
	switch(r)
	{
	case Role::QuasiIdeal: return "quasi_ideal";
	case Role::TrainingNoisy: return "training_noisy";
	case Role::EvalNoisy: return "eval_noisy";
	case Role::Mitigated: return "mitigated";
	case Role::Exact: return "exact";
	case Role::IdealTrotter: return "ideal_trotter";
	}
	return "?";
}

Role role_from_name(std::string_view name)
{
	for(auto r : {Role::QuasiIdeal, Role::TrainingNoisy, Role::EvalNoisy, Role::Mitigated, Role::Exact, Role::IdealTrotter})
	{
		if(role_name(r) == name) { return r; }
	}
	throw ArgumentError("unknown dataset role '" + std::string(name) + "'");
}

Role role_of(Stage s)
{
	switch(s)
	{
	case Stage::QuasiIdeal: return Role::QuasiIdeal;
	case Stage::TrainingNoisy: return Role::TrainingNoisy;
	case Stage::EvalNoisy: return Role::EvalNoisy;
	}
	return Role::QuasiIdeal;
}

RecordKey key_of(const ObservationRecord& r) { return {r.init_state, r.time_index, r.axis, r.qubit}; }

std::vector<std::string> ObservationDataset::init_states() const
{
	std::vector<std::string> out;
	std::set<std::string> seen;
	for(const auto& r : records)
	{
		if(seen.insert(r.init_state).second) { out.push_back(r.init_state); }
	}
	return out;
}

std::vector<double> ObservationDataset::time_points() const
{
	std::vector<double> t;
	for(const auto& r : records)
	{
		if(r.time_index < 1) { continue; }
		const auto i = static_cast<std::size_t>(r.time_index);
		if(t.size() < i) { t.resize(i, std::nan("")); }
		t[i - 1] = r.t;
	}
	return t;
}

RecordIndex index_records(const ObservationDataset& ds)
{
	RecordIndex idx;
	for(std::size_t k = 0; k < ds.records.size(); ++k)
	{
		if(!idx.emplace(key_of(ds.records[k]), k).second)
		{
			const auto& r = ds.records[k];
			throw AlignmentError("duplicate record key (" + r.init_state + ", " + std::to_string(r.time_index) + ", " +
			                     axis_char(r.axis) + ", " + std::to_string(r.qubit) + ")");
		}
	}
	return idx;
}

std::size_t expected_dataset_size(std::size_t num_inits, int num_qubits, int K, std::size_t num_axes)
{
	return num_inits * static_cast<std::size_t>(num_qubits) * static_cast<std::size_t>(K) * num_axes;
}

std::vector<std::string> all_basis_states(int num_qubits)
{
	std::vector<std::string> out;
	for(std::uint64_t k = 0; k < (std::uint64_t{1} << static_cast<unsigned>(num_qubits)); ++k) { out.push_back(index_to_bits(k, num_qubits)); }
	return out;
}

std::vector<Axis> default_axes(ModelKind kind)
{
	if(kind == ModelKind::TFIM) { return {Axis::X, Axis::Y, Axis::Z}; }
	return {Axis::Z};
}

ShotHistogram post_select(const ShotHistogram& h, int target_excitations)
{
	if(target_excitations < 0 || target_excitations > h.num_qubits) { throw ArgumentError("post-selection target outside [0, Nq]"); }
	ShotHistogram out;
	out.num_qubits = h.num_qubits;
	for(const auto& [bits, n] : h.counts)
	{
		if(popcount_bits(bits) == target_excitations && n > 0)
		{
			out.counts.emplace(bits, n);
			out.shots += n;
		}
	}
	if(out.shots == 0) { throw DegeneratePostSelection("post-selection on " + std::to_string(target_excitations) + " excitations kept no shots"); }
	return out;
}

std::vector<double> post_select_distribution(const std::vector<double>& probs, int num_qubits, int target_excitations)
{
	if(target_excitations < 0 || target_excitations > num_qubits) { throw ArgumentError("post-selection target outside [0, Nq]"); }
	std::vector<double> out(probs.size(), 0.0);
	double kept = 0.0;
	for(std::uint64_t k = 0; k < probs.size(); ++k)
	{
		if(std::popcount(k) == target_excitations)
		{
			out[k] = probs[k];
			kept += probs[k];
		}
	}
	if(!(kept > 0.0)) { throw DegeneratePostSelection("post-selection kept zero probability"); }
	for(auto& p : out) { p /= kept; }
	return out;
}

namespace
{

std::uint64_t stage_tag(Stage s) { return static_cast<std::uint64_t>(s) + 1; }

// All records of one (initial state, time point) circuit.
std::vector<ObservationRecord> generate_point(const SpinModel& model, const TrotterSchedule& schedule, Stage stage, const NoiseModel& noise,
                                              std::uint64_t shots, const std::string& init, int time_index, double t,
                                              std::uint64_t seed, const GenerateOptions& options, const std::vector<Axis>& axes)
{
	const int n = model.num_spins;
	const DensityMatrix rho = simulate(build_circuit(model, schedule, t, stage), init, noise);

	std::vector<ObservationRecord> out;
	out.reserve(axes.size() * static_cast<std::size_t>(n));
	for(const Axis axis : axes)
	{
		GateSequence rot;
		rot.num_qubits = n;
		for(int q = 0; q < n; ++q)
		{
			for(auto& g : measurement_prerotation(axis, q)) { rot.push(std::move(g)); }
		}
		DensityMatrix measured = rho;
		run_sequence(measured, rot, noise);

		const bool select = options.post_select.has_value() && axis == Axis::Z;
		const int target = select ? (*options.post_select < 0 ? popcount_bits(init) : *options.post_select) : 0;

		std::vector<double> values(static_cast<std::size_t>(n));
		std::uint64_t record_shots = 0;
		std::uint64_t record_seed = 0;
		if(options.exact_mode)
		{
			auto probs = readout_distribution(measured, noise);
			if(select)
			{
				try
				{
					probs = post_select_distribution(probs, n, target);
				}
				catch(const DegeneratePostSelection& e)
				{
					log_warning(std::string(e.what()) + " for " + init + " at t=" + std::to_string(t) + "; keeping unfiltered data");
				}
			}
			for(int q = 0; q < n; ++q) { values[static_cast<std::size_t>(q)] = parity_expectation(probs, n, q); }
		}
		else
		{
			record_seed = derive_seed(seed, {stage_tag(stage), bits_to_index(init), static_cast<std::uint64_t>(time_index),
			                                 static_cast<std::uint64_t>(axis)});
			ShotHistogram hist = sample_counts(measured, shots, noise, record_seed);
			if(select)
			{
				try
				{
					hist = post_select(hist, target);
				}
				catch(const DegeneratePostSelection& e)
				{
					log_warning(std::string(e.what()) + " for " + init + " at t=" + std::to_string(t) + "; keeping unfiltered data");
				}
			}
			record_shots = hist.shots;
			for(int q = 0; q < n; ++q) { values[static_cast<std::size_t>(q)] = expectation_from_counts(hist, axis, q, axis != Axis::Z); }
		}

		for(int q = 0; q < n; ++q)
		{
			ObservationRecord r;
			r.model = model.kind;
			r.N1 = schedule.N1;
			r.c = schedule.c;
			r.layout = schedule.layout;
			r.role = role_of(stage);
			r.init_state = init;
			r.time_index = time_index;
			r.t = t;
			r.axis = axis;
			r.qubit = q;
			r.value = values[static_cast<std::size_t>(q)];
			r.shots = record_shots;
			r.seed = record_seed;
			out.push_back(std::move(r));
		}
	}
	return out;
}

} // namespace

ObservationDataset generate(const SpinModel& model, const TrotterSchedule& schedule, Stage stage, const NoiseModel& noise,
                            std::uint64_t shots, const std::vector<std::string>& init_states, std::uint64_t seed,
                            const GenerateOptions& options)
{
	model.validate();
	schedule.validate();
	noise.validate();
	if(init_states.empty()) { throw ArgumentError("no initial states given"); }
	for(const auto& s : init_states)
	{
		if(static_cast<int>(s.size()) != model.num_spins) { throw ArgumentError("initial state '" + s + "' has wrong length"); }
		bits_to_index(s);
	}
	if(!options.exact_mode && shots == 0) { throw ArgumentError("shots must be positive outside exact mode"); }
	const std::vector<Axis> axes = options.axes.empty() ? default_axes(model.kind) : options.axes;

	const auto grid = schedule.time_grid();
	const std::size_t num_tasks = init_states.size() * grid.size();
	std::vector<std::vector<ObservationRecord>> slots(num_tasks);

	auto run_task = [&](std::size_t task) {
		const std::size_t l = task / grid.size(), i = task % grid.size();
		slots[task] = generate_point(model, schedule, stage, noise, shots, init_states[l], static_cast<int>(i) + 1, grid[i], seed,
		                             options, axes);
	};

	const unsigned workers = std::max(1U, std::min<unsigned>(options.workers, static_cast<unsigned>(num_tasks)));
	if(workers == 1)
	{
		for(std::size_t task = 0; task < num_tasks; ++task) { run_task(task); }
	}
	else
	{
		std::atomic<std::size_t> next{0};
		std::exception_ptr failure;
		std::mutex failure_mutex;
		{
			std::vector<std::jthread> pool;
			for(unsigned w = 0; w < workers; ++w)
			{
				pool.emplace_back([&] {
					for(std::size_t task = next++; task < num_tasks; task = next++)
					{
						try
						{
							run_task(task);
						}
						catch(...)
						{
							const std::lock_guard lock(failure_mutex);
							if(!failure) { failure = std::current_exception(); }
						}
					}
				});
			}
		}
		if(failure) { std::rethrow_exception(failure); }
	}

	ObservationDataset ds;
	ds.meta.role = role_of(stage);
	ds.meta.model = model;
	ds.meta.schedule = schedule;
	ds.meta.noise = noise;
	ds.meta.trotter_blocks = stage == Stage::QuasiIdeal ? schedule.N1 : schedule.N2();
	ds.meta.shots = options.exact_mode ? 0 : shots;
	ds.meta.exact_mode = options.exact_mode;
	ds.meta.master_seed = seed;
	ds.meta.axes = axes;
	ds.meta.post_selected = options.post_select.has_value();
	ds.meta.post_select_target = options.post_select.value_or(-1);
	ds.meta.config_hash = options.config_hash;
	ds.meta.lineage_hash = options.lineage_hash;
	ds.records.reserve(expected_dataset_size(init_states.size(), model.num_spins, schedule.K, axes.size()));
	for(auto& slot : slots)
	{
		for(auto& r : slot) { ds.records.push_back(std::move(r)); }
	}
	return ds;
}

std::vector<PairKey> pair_keys(const ObservationDataset& ds)
{
	std::set<PairKey> seen;
	std::vector<PairKey> keys;
	for(const auto& r : ds.records)
	{
		PairKey k{r.init_state, r.time_index};
		if(seen.insert(k).second) { keys.push_back(std::move(k)); }
	}
	return keys;
}

Eigen::MatrixXd feature_matrix(const ObservationDataset& ds, const std::vector<Axis>& axes, const std::vector<PairKey>& keys)
{
	const int n = ds.meta.model.num_spins;
	const RecordIndex idx = index_records(ds);
	Eigen::MatrixXd m(static_cast<Eigen::Index>(axes.size()) * n, static_cast<Eigen::Index>(keys.size()));
	std::vector<std::string> missing;
	for(std::size_t p = 0; p < keys.size(); ++p)
	{
		Eigen::Index row = 0;
		for(const Axis a : axes)
		{
			for(int q = 0; q < n; ++q, ++row)
			{
				const auto it = idx.find({keys[p].init_state, keys[p].time_index, a, q});
				if(it == idx.end())
				{
					if(missing.size() < 20)
					{
						missing.push_back("(" + keys[p].init_state + ", " + std::to_string(keys[p].time_index) + ", " + axis_char(a) + ", " +
						                  std::to_string(q) + ")");
					}
					continue;
				}
				m(row, static_cast<Eigen::Index>(p)) = ds.records[it->second].value;
			}
		}
	}
	if(!missing.empty())
	{
		std::string msg = "dataset '" + std::string(role_name(ds.meta.role)) + "' is missing keys:";
		for(const auto& s : missing) { msg += " " + s; }
		throw AlignmentError(msg);
	}
	return m;
}

TrainingPairs pair_for_training(const ObservationDataset& noisy, const ObservationDataset& quasi_ideal, const PairingOptions& options)
{
	if(options.strict_roles)
	{
		if(noisy.meta.role != Role::TrainingNoisy) { throw ArgumentError("training inputs must have role training_noisy"); }
		if(quasi_ideal.meta.role != Role::QuasiIdeal) { throw ArgumentError("training targets must have role quasi_ideal"); }
	}
	if(noisy.meta.model.num_spins != quasi_ideal.meta.model.num_spins) { throw AlignmentError("datasets have different chain lengths"); }

	const auto noisy_keys = pair_keys(noisy);
	const auto target_keys = pair_keys(quasi_ideal);
	const std::set<PairKey> a(noisy_keys.begin(), noisy_keys.end()), b(target_keys.begin(), target_keys.end());
	if(a != b)
	{
		std::string msg = "training datasets cover different (init, time) keys;";
		int listed = 0;
		for(const auto& k : a)
		{
			if(!b.contains(k) && listed++ < 20) { msg += " missing in targets: (" + k.init_state + ", " + std::to_string(k.time_index) + ")"; }
		}
		for(const auto& k : b)
		{
			if(!a.contains(k) && listed++ < 20) { msg += " missing in inputs: (" + k.init_state + ", " + std::to_string(k.time_index) + ")"; }
		}
		throw AlignmentError(msg);
	}

	TrainingPairs pairs;
	pairs.keys = noisy_keys;
	pairs.input_axes = noisy.meta.axes.empty() ? default_axes(noisy.meta.model.kind) : noisy.meta.axes;
	pairs.num_qubits = noisy.meta.model.num_spins;
	pairs.inputs = feature_matrix(noisy, pairs.input_axes, pairs.keys);
	pairs.targets = feature_matrix(quasi_ideal, {Axis::Z}, pairs.keys);
	return pairs;
}

ObservationDataset reference_dataset(const SpinModel& model, const TrotterSchedule& schedule, Role role, int trotter_number,
                                     const std::vector<std::string>& init_states, const std::vector<Axis>& axes)
{
	if(role != Role::Exact && role != Role::IdealTrotter) { throw ArgumentError("reference datasets have role exact or ideal_trotter"); }
	const auto grid = schedule.time_grid();
	const auto obs = observables_for(axes, model.num_spins);
	ObservationDataset ds;
	ds.meta.role = role;
	ds.meta.model = model;
	ds.meta.schedule = schedule;
	ds.meta.trotter_blocks = role == Role::Exact ? 0 : trotter_number;
	ds.meta.exact_mode = true;
	ds.meta.axes = axes;
	for(const auto& init : init_states)
	{
		const ValueTable table = role == Role::Exact ? exact_expectations(model, init, grid, obs)
		                                             : ideal_trotter_expectations(model, init, trotter_number, grid, obs);
		for(std::size_t i = 0; i < grid.size(); ++i)
		{
			for(std::size_t o = 0; o < obs.size(); ++o)
			{
				ObservationRecord r;
				r.model = model.kind;
				r.N1 = schedule.N1;
				r.c = schedule.c;
				r.layout = schedule.layout;
				r.role = role;
				r.init_state = init;
				r.time_index = static_cast<int>(i) + 1;
				r.t = grid[i];
				r.axis = obs[o].axis;
				r.qubit = obs[o].qubit;
				r.value = table[i][o];
				ds.records.push_back(std::move(r));
			}
		}
	}
	return ds;
}

// ---------------------------------------------------------------------------
// JSON-lines persistence

namespace
{

std::string axes_string(const std::vector<Axis>& axes)
{
	std::string s;
	for(const auto a : axes) { s += axis_char(a); }
	return s;
}

nlohmann::json record_to_json(const ObservationRecord& r)
{
	return nlohmann::json{{"model", model_kind_name(r.model)},
	                      {"N1", r.N1},
	                      {"c", r.c},
	                      {"layout", layout_name(r.layout)},
	                      {"role", role_name(r.role)},
	                      {"init_state", r.init_state},
	                      {"time_index", r.time_index},
	                      {"t", r.t},
	                      {"axis", std::string(1, axis_char(r.axis))},
	                      {"qubit", r.qubit},
	                      {"value", r.value},
	                      {"shots", r.shots},
	                      {"seed", r.seed}};
}

ObservationRecord record_from_json(const nlohmann::json& j)
{
	ObservationRecord r;
	r.model = model_kind_from_name(j.at("model").get<std::string>());
	r.N1 = j.at("N1").get<int>();
	r.c = j.at("c").get<int>();
	r.layout = layout_from_name(j.at("layout").get<std::string>());
	r.role = role_from_name(j.at("role").get<std::string>());
	r.init_state = j.at("init_state").get<std::string>();
	r.time_index = j.at("time_index").get<int>();
	r.t = j.at("t").get<double>();
	const auto axis = j.at("axis").get<std::string>();
	if(axis.size() != 1) { throw ArgumentError("axis must be a single character"); }
	r.axis = axis_from_char(axis[0]);
	r.qubit = j.at("qubit").get<int>();
	r.value = j.at("value").get<double>();
	r.shots = j.at("shots").get<std::uint64_t>();
	r.seed = j.at("seed").get<std::uint64_t>();
	return r;
}

} // namespace

nlohmann::json meta_to_json(const DatasetMeta& m)
{
	nlohmann::json readout = nlohmann::json::array();
	for(const auto& r : m.noise.readout) { readout.push_back({r.e01, r.e10}); }
	return nlohmann::json{
	    {"format", "qmit-dataset"},
	    {"version", m.version},
	    {"role", role_name(m.role)},
	    {"model", {{"kind", model_kind_name(m.model.kind)}, {"Nq", m.model.num_spins}, {"J", m.model.J}, {"h", m.model.h}}},
	    {"schedule",
	     {{"N1", m.schedule.N1},
	      {"c", m.schedule.c},
	      {"N2", m.schedule.N2()},
	      {"T", m.schedule.T},
	      {"K", m.schedule.K},
	      {"layout", layout_name(m.schedule.layout)},
	      {"custom_permutation", m.schedule.custom_permutation},
	      {"epsilon_angle", m.schedule.epsilon_angle}}},
	    {"noise", {{"enabled", m.noise.enabled}, {"p1", m.noise.p1}, {"p2", m.noise.p2}, {"readout", readout}}},
	    {"trotter_blocks", m.trotter_blocks},
	    {"shots", m.shots},
	    {"exact_mode", m.exact_mode},
	    {"seed", m.master_seed},
	    {"axes", axes_string(m.axes)},
	    {"B", m.axes.size()},
	    {"post_select", {{"enabled", m.post_selected}, {"target", m.post_select_target}}},
	    {"config_hash", m.config_hash},
	    {"lineage_hash", m.lineage_hash},
	    {"extra", m.extra}};
}

DatasetMeta meta_from_json(const nlohmann::json& j)
{
	if(j.value("format", std::string{}) != "qmit-dataset") { throw ArgumentError("not a qmit dataset header"); }
	DatasetMeta m;
	m.version = j.at("version").get<int>();
	if(m.version != kDatasetFormatVersion)
	{
		throw ArgumentError("dataset format version " + std::to_string(m.version) + " is not supported (expected " +
		                    std::to_string(kDatasetFormatVersion) + ")");
	}
	m.role = role_from_name(j.at("role").get<std::string>());
	const auto& mo = j.at("model");
	m.model.kind = model_kind_from_name(mo.at("kind").get<std::string>());
	m.model.num_spins = mo.at("Nq").get<int>();
	m.model.J = mo.at("J").get<double>();
	m.model.h = mo.at("h").get<double>();
	const auto& s = j.at("schedule");
	m.schedule.N1 = s.at("N1").get<int>();
	m.schedule.c = s.at("c").get<int>();
	m.schedule.T = s.at("T").get<double>();
	m.schedule.K = s.at("K").get<int>();
	m.schedule.layout = layout_from_name(s.at("layout").get<std::string>());
	m.schedule.custom_permutation = s.at("custom_permutation").get<std::vector<int>>();
	m.schedule.epsilon_angle = s.at("epsilon_angle").get<double>();
	const auto& nz = j.at("noise");
	m.noise.enabled = nz.at("enabled").get<bool>();
	m.noise.p1 = nz.at("p1").get<double>();
	m.noise.p2 = nz.at("p2").get<double>();
	for(const auto& r : nz.at("readout")) { m.noise.readout.push_back({r.at(0).get<double>(), r.at(1).get<double>()}); }
	m.trotter_blocks = j.at("trotter_blocks").get<int>();
	m.shots = j.at("shots").get<std::uint64_t>();
	m.exact_mode = j.at("exact_mode").get<bool>();
	m.master_seed = j.at("seed").get<std::uint64_t>();
	for(const char c : j.at("axes").get<std::string>()) { m.axes.push_back(axis_from_char(c)); }
	m.post_selected = j.at("post_select").at("enabled").get<bool>();
	m.post_select_target = j.at("post_select").at("target").get<int>();
	m.config_hash = j.at("config_hash").get<std::string>();
	m.lineage_hash = j.at("lineage_hash").get<std::string>();
	m.extra = j.value("extra", nlohmann::json::object());
	return m;
}

std::string to_jsonl(const ObservationDataset& ds)
{
	std::string out = meta_to_json(ds.meta).dump();
	out += '\n';
	for(const auto& r : ds.records)
	{
		out += record_to_json(r).dump();
		out += '\n';
	}
	return out;
}

ObservationDataset dataset_from_jsonl(std::string_view text, const std::string& source_name)
{
	std::istringstream in{std::string(text)};
	std::string line;
	std::size_t lineno = 0;
	ObservationDataset ds;
	bool have_header = false;
	RecordIndex seen;
	while(std::getline(in, line))
	{
		++lineno;
		if(line.empty()) { continue; }
		try
		{
			const auto j = nlohmann::json::parse(line);
			if(!have_header)
			{
				ds.meta = meta_from_json(j);
				have_header = true;
				continue;
			}
			ObservationRecord r = record_from_json(j);
			if(r.shots == 0 && !ds.meta.exact_mode) { throw ArgumentError("record has shots = 0 in a sampled dataset"); }
			if(r.role != ds.meta.role) { throw ArgumentError("record role differs from header role"); }
			if(r.qubit < 0 || r.qubit >= ds.meta.model.num_spins) { throw ArgumentError("qubit index out of range"); }
			if(static_cast<int>(r.init_state.size()) != ds.meta.model.num_spins) { throw ArgumentError("init_state length mismatch"); }
			bits_to_index(r.init_state);
			const double slack = r.shots > 0 ? 3.0 / std::sqrt(static_cast<double>(r.shots)) : 1e-9;
			if(!std::isfinite(r.value) || std::abs(r.value) > 1.0 + slack) { throw ArgumentError("value outside [-1, 1] plus shot slack"); }
			if(!seen.emplace(key_of(r), ds.records.size()).second) { throw ArgumentError("duplicate (init_state, time_index, axis, qubit) key"); }
			ds.records.push_back(std::move(r));
		}
		catch(const ParseError&)
		{
			throw;
		}
		catch(const std::exception& e)
		{
			throw ParseError(source_name, lineno, e.what());
		}
	}
	if(!have_header) { throw ParseError(source_name, lineno, "missing dataset header"); }
	return ds;
}

void save(const ObservationDataset& ds, const std::filesystem::path& path)
{
	if(path.has_parent_path()) { std::filesystem::create_directories(path.parent_path()); }
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	if(!out) { throw std::runtime_error("cannot open " + path.string() + " for writing"); }
	out << to_jsonl(ds);
}

ObservationDataset load_dataset(const std::filesystem::path& path)
{
	std::ifstream in(path, std::ios::binary);
	if(!in) { throw ParseError(path.string(), 0, "cannot open file"); }
	std::stringstream buf;
	buf << in.rdbuf();
	return dataset_from_jsonl(buf.str(), path.string());
}

std::string to_csv(const ObservationDataset& ds)
{
	std::ostringstream out;
	out << std::setprecision(17);
	out << "model,N1,c,layout,role,init_state,time_index,t,axis,qubit,value,shots,seed\n";
	for(const auto& r : ds.records)
	{
		out << model_kind_name(r.model) << ',' << r.N1 << ',' << r.c << ',' << layout_name(r.layout) << ',' << role_name(r.role) << ','
		    << r.init_state << ',' << r.time_index << ',' << r.t << ',' << axis_char(r.axis) << ',' << r.qubit << ',' << r.value << ','
		    << r.shots << ',' << r.seed << '\n';
	}
	return out.str();
}

} // namespace qmit
