#include "qmit/mitigator.hpp"

#include "qmit/errors.hpp"
#include "qmit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

namespace qmit
{

namespace
{

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) { return (1.0 + (-z.array()).exp()).inverse().matrix(); }

struct Activations
{
	std::vector<Eigen::MatrixXd> a; // a[0] = encoded input, a[L] = output
};

Activations forward_all(const MlpModel& model, const Eigen::MatrixXd& x)
{
	Activations act;
	act.a.reserve(model.layers().size() + 1);
	act.a.push_back(x);
	for(const auto& layer : model.layers())
	{
		Eigen::MatrixXd z = layer.weights * act.a.back();
		z.colwise() += layer.bias;
		act.a.push_back(sigmoid(z));
	}
	return act;
}

void check_shapes(const MlpModel& model, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets)
{
	if(model.layers().empty()) { throw ArgumentError("model has no layers"); }
	if(inputs.rows() != model.input_size()) { throw ArgumentError("input width does not match model K_in"); }
	if(targets.rows() != model.output_size()) { throw ArgumentError("target width does not match model K_out"); }
	if(inputs.cols() != targets.cols()) { throw ArgumentError("input and target pair counts differ"); }
	if(inputs.cols() == 0) { throw ArgumentError("no training pairs"); }
}

} // namespace

MlpModel::MlpModel(std::vector<int> layer_sizes) : sizes_{std::move(layer_sizes)}
{
	if(sizes_.size() < 2) { throw ArgumentError("a network needs at least input and output widths"); }
	for(const int s : sizes_)
	{
		if(s < 1) { throw ArgumentError("layer widths must be positive"); }
	}
	for(std::size_t l = 1; l < sizes_.size(); ++l)
	{
		layers_.push_back({Eigen::MatrixXd::Zero(sizes_[l], sizes_[l - 1]), Eigen::VectorXd::Zero(sizes_[l])});
	}
}

MlpModel MlpModel::glorot(std::vector<int> layer_sizes, std::uint64_t seed)
{
	MlpModel m(std::move(layer_sizes));
	Rng rng{seed};
	for(auto& layer : m.layers_)
	{
		const double limit = std::sqrt(6.0 / static_cast<double>(layer.weights.rows() + layer.weights.cols()));
		for(Eigen::Index r = 0; r < layer.weights.rows(); ++r)
		{
			for(Eigen::Index c = 0; c < layer.weights.cols(); ++c) { layer.weights(r, c) = rng.uniform(-limit, limit); }
		}
	}
	return m;
}

Eigen::Index MlpModel::parameter_count() const
{
	Eigen::Index n = 0;
	for(const auto& l : layers_) { n += l.weights.size() + l.bias.size(); }
	return n;
}

bool MlpModel::all_finite() const
{
	return std::ranges::all_of(layers_, [](const DenseLayer& l) { return l.weights.allFinite() && l.bias.allFinite(); });
}

Eigen::VectorXd MlpModel::flatten() const
{
	Eigen::VectorXd flat(parameter_count());
	Eigen::Index k = 0;
	for(const auto& l : layers_)
	{
		for(Eigen::Index r = 0; r < l.weights.rows(); ++r)
		{
			for(Eigen::Index c = 0; c < l.weights.cols(); ++c) { flat(k++) = l.weights(r, c); }
		}
		for(Eigen::Index r = 0; r < l.bias.size(); ++r) { flat(k++) = l.bias(r); }
	}
	return flat;
}

void MlpModel::assign(const Eigen::VectorXd& flat)
{
	if(flat.size() != parameter_count()) { throw ArgumentError("flat parameter vector has wrong length"); }
	Eigen::Index k = 0;
	for(auto& l : layers_)
	{
		for(Eigen::Index r = 0; r < l.weights.rows(); ++r)
		{
			for(Eigen::Index c = 0; c < l.weights.cols(); ++c) { l.weights(r, c) = flat(k++); }
		}
		for(Eigen::Index r = 0; r < l.bias.size(); ++r) { l.bias(r) = flat(k++); }
	}
}

Eigen::VectorXd forward(const MlpModel& model, const Eigen::VectorXd& x)
{
	if(x.size() != model.input_size()) { throw ArgumentError("input width does not match model K_in"); }
	if(!x.allFinite()) { throw ArgumentError("non-finite network input"); }
	return forward_batch(model, x);
}

Eigen::MatrixXd forward_batch(const MlpModel& model, const Eigen::MatrixXd& x)
{
	if(x.rows() != model.input_size()) { throw ArgumentError("input width does not match model K_in"); }
	return forward_all(model, x).a.back();
}

double loss(const MlpModel& model, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets)
{
	check_shapes(model, inputs, targets);
	const Eigen::MatrixXd y = Encoding::decode(forward_batch(model, Encoding::encode(inputs)));
	return (y - targets).squaredNorm() / (2.0 * static_cast<double>(targets.size()));
}

double loss(const MlpModel& model, const TrainingPairs& pairs) { return loss(model, pairs.inputs, pairs.targets); }

Eigen::VectorXd Gradient::flatten() const
{
	Eigen::Index n = 0;
	for(std::size_t l = 0; l < weights.size(); ++l) { n += weights[l].size() + bias[l].size(); }
	Eigen::VectorXd flat(n);
	Eigen::Index k = 0;
	for(std::size_t l = 0; l < weights.size(); ++l)
	{
		for(Eigen::Index r = 0; r < weights[l].rows(); ++r)
		{
			for(Eigen::Index c = 0; c < weights[l].cols(); ++c) { flat(k++) = weights[l](r, c); }
		}
		for(Eigen::Index r = 0; r < bias[l].size(); ++r) { flat(k++) = bias[l](r); }
	}
	return flat;
}

Gradient gradient(const MlpModel& model, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets, double* loss_out)
{
	check_shapes(model, inputs, targets);
	const Activations act = forward_all(model, Encoding::encode(inputs));
	const std::size_t L = model.layers().size();
	const double D = static_cast<double>(targets.size());

	const Eigen::MatrixXd residual = Encoding::decode(act.a[L]) - targets;
	if(loss_out != nullptr) { *loss_out = residual.squaredNorm() / (2.0 * D); }

	Gradient g;
	g.weights.resize(L);
	g.bias.resize(L);
	// dE/da_L = (1/D) residual * d(decode)/dy = (2/D) residual
	Eigen::MatrixXd delta = ((2.0 / D) * residual.array() * act.a[L].array() * (1.0 - act.a[L].array())).matrix();
	for(std::size_t l = L; l-- > 0;)
	{
		g.weights[l] = delta * act.a[l].transpose();
		g.bias[l] = delta.rowwise().sum();
		if(l > 0)
		{
			const Eigen::MatrixXd back = model.layers()[l].weights.transpose() * delta;
			delta = (back.array() * act.a[l].array() * (1.0 - act.a[l].array())).matrix();
		}
	}
	return g;
}

Gradient gradient(const MlpModel& model, const TrainingPairs& pairs) { return gradient(model, pairs.inputs, pairs.targets); }

// ---------------------------------------------------------------------------

void TrainConfig::validate() const
{
	if(epochs < checkpoint_every) { throw ArgumentError("epochs must be >= checkpoint_every"); }
	if(checkpoint_every == 0) { throw ArgumentError("checkpoint_every must be positive"); }
	if(!(validation_fraction >= 0.0 && validation_fraction <= 0.5)) { throw ArgumentError("validation_fraction must lie in [0, 0.5]"); }
	if(!(alpha > 0.0)) { throw ArgumentError("Adam step size must be positive"); }
	if(!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) { throw ArgumentError("Adam decays must lie in [0, 1)"); }
	if(!(epsilon_adam > 0.0)) { throw ArgumentError("epsilon_adam must be positive"); }
	for(const int h : hidden)
	{
		if(h < 1) { throw ArgumentError("hidden widths must be positive"); }
	}
}

nlohmann::json TrainConfig::to_json() const
{
	return {{"hidden", hidden},
	        {"epochs", epochs},
	        {"checkpoint_every", checkpoint_every},
	        {"alpha", alpha},
	        {"beta1", beta1},
	        {"beta2", beta2},
	        {"epsilon_adam", epsilon_adam},
	        {"batch_size", batch_size},
	        {"seed", seed},
	        {"validation_fraction", validation_fraction}};
}

std::string TrainConfig::hash() const
{
	std::ostringstream s;
	s << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(to_json().dump());
	return s.str();
}

std::vector<bool> validation_mask(const std::vector<PairKey>& keys, double fraction, std::uint64_t seed)
{
	std::vector<bool> mask(keys.size(), false);
	if(fraction <= 0.0) { return mask; }
	std::map<std::string, std::vector<std::size_t>> by_init;
	for(std::size_t p = 0; p < keys.size(); ++p) { by_init[keys[p].init_state].push_back(p); }
	for(auto& [init, members] : by_init)
	{
		// Fisher-Yates with the engine-only Rng so the split is library independent.
		Rng rng{derive_seed(seed, {bits_to_index(init), 0x7a11dULL})};
		for(std::size_t k = members.size(); k > 1; --k) { std::swap(members[k - 1], members[rng.below(k)]); }
		const auto take = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(members.size())));
		for(std::size_t k = 0; k < take && k < members.size(); ++k) { mask[members[k]] = true; }
	}
	return mask;
}

namespace
{

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& cols)
{
	Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(cols.size()));
	for(std::size_t k = 0; k < cols.size(); ++k) { out.col(static_cast<Eigen::Index>(k)) = m.col(cols[k]); }
	return out;
}

struct AdamState
{
	Eigen::VectorXd m, v;
	std::size_t step = 0;
};

} // namespace

TrainResult train(const TrainingPairs& pairs, const TrainConfig& cfg)
{
	cfg.validate();
	if(pairs.size() < 2) { throw ArgumentError("training needs at least 2 pairs"); }

	const auto val_mask = validation_mask(pairs.keys, cfg.validation_fraction, cfg.seed);
	std::vector<Eigen::Index> train_cols, val_cols;
	for(Eigen::Index p = 0; p < pairs.size(); ++p) { (val_mask[static_cast<std::size_t>(p)] ? val_cols : train_cols).push_back(p); }
	if(train_cols.empty()) { throw ArgumentError("validation split left no training pairs"); }

	const Eigen::MatrixXd x_train = select_columns(pairs.inputs, train_cols);
	const Eigen::MatrixXd y_train = select_columns(pairs.targets, train_cols);
	const Eigen::MatrixXd x_val = select_columns(pairs.inputs, val_cols);
	const Eigen::MatrixXd y_val = select_columns(pairs.targets, val_cols);
	const bool has_val = !val_cols.empty();

	std::vector<int> sizes{static_cast<int>(pairs.inputs.rows())};
	sizes.insert(sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
	sizes.push_back(static_cast<int>(pairs.targets.rows()));

	Rng rng{cfg.seed};
	MlpModel model = MlpModel::glorot(sizes, rng.split(1).seed());
	model.input_axes = pairs.input_axes;
	model.num_qubits = pairs.num_qubits;

	TrainResult result;
	result.train_config_hash = cfg.hash();
	for(std::size_t k = 0; k < val_cols.size(); ++k) { result.validation_keys.push_back(pairs.keys[static_cast<std::size_t>(val_cols[k])]); }

	auto record_checkpoint = [&](std::size_t epoch) {
		const double tl = loss(model, x_train, y_train);
		const double vl = has_val ? loss(model, x_val, y_val) : tl;
		if(!std::isfinite(tl) || !std::isfinite(vl)) { throw TrainingDivergence(epoch, "loss became non-finite"); }
		result.log.push_back({epoch, tl, vl});
		if(result.log.size() == 1 || vl < result.best_validation_loss)
		{
			result.best_epoch = epoch;
			result.best_validation_loss = vl;
			result.best_train_loss = tl;
			result.model = model;
		}
	};

	AdamState adam;
	adam.m = Eigen::VectorXd::Zero(model.parameter_count());
	adam.v = Eigen::VectorXd::Zero(model.parameter_count());
	Eigen::VectorXd theta = model.flatten();

	const auto n_train = static_cast<std::size_t>(x_train.cols());
	const std::size_t batch = cfg.batch_size == 0 ? n_train : std::min(cfg.batch_size, n_train);
	std::vector<Eigen::Index> order(n_train);
	std::iota(order.begin(), order.end(), Eigen::Index{0});
	Rng batch_rng = rng.split(2);

	record_checkpoint(0);
	for(std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch)
	{
		if(batch < n_train)
		{
			for(std::size_t k = order.size(); k > 1; --k) { std::swap(order[k - 1], order[batch_rng.below(k)]); }
		}
		for(std::size_t start = 0; start < n_train; start += batch)
		{
			double batch_loss = 0.0;
			Gradient g;
			if(batch == n_train) { g = gradient(model, x_train, y_train, &batch_loss); }
			else
			{
				const std::vector<Eigen::Index> cols(order.begin() + static_cast<std::ptrdiff_t>(start),
				                                     order.begin() + static_cast<std::ptrdiff_t>(std::min(start + batch, n_train)));
				g = gradient(model, select_columns(x_train, cols), select_columns(y_train, cols), &batch_loss);
			}
			if(!std::isfinite(batch_loss)) { throw TrainingDivergence(epoch, "loss became non-finite"); }

			const Eigen::VectorXd grad = g.flatten();
			++adam.step;
			adam.m = cfg.beta1 * adam.m + (1.0 - cfg.beta1) * grad;
			adam.v = cfg.beta2 * adam.v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
			const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(adam.step));
			const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(adam.step));
			theta.array() -= cfg.alpha * (adam.m.array() / c1) / ((adam.v.array() / c2).sqrt() + cfg.epsilon_adam);
			model.assign(theta);
		}
		if(epoch % cfg.checkpoint_every == 0) { record_checkpoint(epoch); }
	}
	return result;
}

ObservationDataset mitigate(const MlpModel& model, const ObservationDataset& noisy, bool require_eval_role)
{
	if(require_eval_role && noisy.meta.role != Role::EvalNoisy) { throw ArgumentError("mitigation input must have role eval_noisy"); }
	const int n = noisy.meta.model.num_spins;
	if(model.num_qubits != 0 && model.num_qubits != n) { throw ArgumentError("model was trained for a different chain length"); }
	if(model.input_size() != static_cast<int>(model.input_axes.size()) * n)
	{
		throw ArgumentError("model K_in does not match its feature layout");
	}
	if(model.output_size() != n) { throw ArgumentError("model K_out must equal the number of spins"); }

	const auto keys = pair_keys(noisy);
	const Eigen::MatrixXd features = feature_matrix(noisy, model.input_axes, keys);
	const Eigen::MatrixXd out = Encoding::decode(forward_batch(model, Encoding::encode(features)));

	std::map<PairKey, const ObservationRecord*> proto;
	for(const auto& r : noisy.records) { proto.emplace(PairKey{r.init_state, r.time_index}, &r); }

	ObservationDataset ds;
	ds.meta = noisy.meta;
	ds.meta.role = Role::Mitigated;
	ds.meta.axes = {Axis::Z};
	for(std::size_t p = 0; p < keys.size(); ++p)
	{
		const ObservationRecord& src = *proto.at(keys[p]);
		for(int q = 0; q < n; ++q)
		{
			ObservationRecord r = src;
			r.role = Role::Mitigated;
			r.axis = Axis::Z;
			r.qubit = q;
			r.value = out(q, static_cast<Eigen::Index>(p));
			ds.records.push_back(std::move(r));
		}
	}
	return ds;
}

// ---------------------------------------------------------------------------

Checkpoint make_checkpoint(const TrainResult& result, const TrainConfig& cfg)
{
	Checkpoint cp;
	cp.model = result.model;
	cp.train_config_hash = result.train_config_hash;
	cp.best_epoch = result.best_epoch;
	cp.best_validation_loss = result.best_validation_loss;
	cp.train_config = cfg.to_json();
	return cp;
}

nlohmann::json checkpoint_to_json(const Checkpoint& cp)
{
	nlohmann::json layers = nlohmann::json::array();
	for(const auto& l : cp.model.layers())
	{
		std::vector<double> w;
		w.reserve(static_cast<std::size_t>(l.weights.size()));
		for(Eigen::Index r = 0; r < l.weights.rows(); ++r)
		{
			for(Eigen::Index c = 0; c < l.weights.cols(); ++c) { w.push_back(l.weights(r, c)); }
		}
		layers.push_back({{"weights", w}, {"bias", std::vector<double>(l.bias.data(), l.bias.data() + l.bias.size())}});
	}
	std::string axes;
	for(const auto a : cp.model.input_axes) { axes += axis_char(a); }
	return {{"format", "qmit-checkpoint"},
	        {"version", kCheckpointFormatVersion},
	        {"layer_sizes", cp.model.layer_sizes()},
	        {"activation", "sigmoid"},
	        {"encoding", {{"input", "(m+1)/2"}, {"output", "2y-1"}}},
	        {"input_axes", axes},
	        {"num_qubits", cp.model.num_qubits},
	        {"layers", layers},
	        {"train_config_hash", cp.train_config_hash},
	        {"train_config", cp.train_config},
	        {"best_epoch", cp.best_epoch},
	        {"best_validation_loss", cp.best_validation_loss},
	        {"config_hash", cp.config_hash},
	        {"lineage_hash", cp.lineage_hash}};
}

Checkpoint checkpoint_from_json(const nlohmann::json& j)
{
	if(j.value("format", std::string{}) != "qmit-checkpoint") { throw ArgumentError("not a qmit checkpoint"); }
	if(j.at("version").get<int>() != kCheckpointFormatVersion) { throw ArgumentError("unsupported checkpoint version"); }
	Checkpoint cp;
	cp.model = MlpModel(j.at("layer_sizes").get<std::vector<int>>());
	cp.model.input_axes.clear();
	for(const char c : j.at("input_axes").get<std::string>()) { cp.model.input_axes.push_back(axis_from_char(c)); }
	cp.model.num_qubits = j.at("num_qubits").get<int>();
	const auto& layers = j.at("layers");
	if(layers.size() != cp.model.layers().size()) { throw ArgumentError("checkpoint layer count mismatch"); }
	for(std::size_t l = 0; l < layers.size(); ++l)
	{
		auto& dst = cp.model.layers()[l];
		const auto w = layers[l].at("weights").get<std::vector<double>>();
		const auto b = layers[l].at("bias").get<std::vector<double>>();
		if(static_cast<Eigen::Index>(w.size()) != dst.weights.size() || static_cast<Eigen::Index>(b.size()) != dst.bias.size())
		{
			throw ArgumentError("checkpoint parameter shape mismatch in layer " + std::to_string(l));
		}
		std::size_t k = 0;
		for(Eigen::Index r = 0; r < dst.weights.rows(); ++r)
		{
			for(Eigen::Index c = 0; c < dst.weights.cols(); ++c) { dst.weights(r, c) = w[k++]; }
		}
		for(std::size_t r = 0; r < b.size(); ++r) { dst.bias(static_cast<Eigen::Index>(r)) = b[r]; }
	}
	cp.train_config_hash = j.at("train_config_hash").get<std::string>();
	cp.train_config = j.at("train_config");
	cp.best_epoch = j.at("best_epoch").get<std::size_t>();
	cp.best_validation_loss = j.at("best_validation_loss").get<double>();
	cp.config_hash = j.at("config_hash").get<std::string>();
	cp.lineage_hash = j.at("lineage_hash").get<std::string>();
	return cp;
}

void save_checkpoint(const Checkpoint& cp, const std::filesystem::path& path)
{
	if(path.has_parent_path()) { std::filesystem::create_directories(path.parent_path()); }
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	if(!out) { throw std::runtime_error("cannot open " + path.string() + " for writing"); }
	out << checkpoint_to_json(cp).dump() << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path)
{
	std::ifstream in(path, std::ios::binary);
	if(!in) { throw ParseError(path.string(), 0, "cannot open file"); }
	try
	{
		return checkpoint_from_json(nlohmann::json::parse(in));
	}
	catch(const std::exception& e)
	{
		throw ParseError(path.string(), 1, e.what());
	}
}

std::string loss_log_csv(const std::vector<CheckpointEntry>& log)
{
	std::ostringstream out;
	out << std::setprecision(17) << "epoch,train_loss,validation_loss\n";
	for(const auto& e : log) { out << e.epoch << ',' << e.train_loss << ',' << e.validation_loss << '\n'; }
	return out.str();
}

} // namespace qmit
