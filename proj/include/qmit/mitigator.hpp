#pragma once

// Feed-forward sigmoid network that maps noisy observables onto less noisy
// z-magnetizations, trained with full-batch Adam on the half mean-square error
//   E = 1/(2D) sum (decode(y) - target)^2,  D = pairs * K_out.

#include "qmit/datasets.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace qmit
{

/// Magnetizations in [-1, 1] <-> sigmoid range (0, 1).
struct Encoding
{
	static double encode(double m) { return 0.5 * (m + 1.0); }
	static double decode(double y) { return 2.0 * y - 1.0; }
	static Eigen::MatrixXd encode(const Eigen::MatrixXd& m) { return (m.array() + 1.0) * 0.5; }
	static Eigen::MatrixXd decode(const Eigen::MatrixXd& y) { return 2.0 * y.array() - 1.0; }
};

struct DenseLayer
{
	Eigen::MatrixXd weights; // out x in
	Eigen::VectorXd bias;    // out

	friend bool operator==(const DenseLayer& a, const DenseLayer& b)
	{
		return a.weights.rows() == b.weights.rows() && a.weights.cols() == b.weights.cols() && a.bias.size() == b.bias.size() &&
		       a.weights == b.weights && a.bias == b.bias;
	}
};

class MlpModel
{
public:
	MlpModel() = default;
	/// Zero-initialized network with the given layer widths (input first).
	explicit MlpModel(std::vector<int> layer_sizes);

	/// Uniform in +-sqrt(6 / (fan_in + fan_out)), zero biases.
	static MlpModel glorot(std::vector<int> layer_sizes, std::uint64_t seed);

	[[nodiscard]] const std::vector<int>& layer_sizes() const { return sizes_; }
	[[nodiscard]] int input_size() const { return sizes_.front(); }
	[[nodiscard]] int output_size() const { return sizes_.back(); }
	[[nodiscard]] std::vector<DenseLayer>& layers() { return layers_; }
	[[nodiscard]] const std::vector<DenseLayer>& layers() const { return layers_; }
	[[nodiscard]] Eigen::Index parameter_count() const;
	[[nodiscard]] bool all_finite() const;

	/// Flat parameter view: per layer, weights row-major then bias.
	[[nodiscard]] Eigen::VectorXd flatten() const;
	void assign(const Eigen::VectorXd& flat);

	// Feature layout metadata carried with the weights.
	std::vector<Axis> input_axes{Axis::Z};
	int num_qubits = 0;

	friend bool operator==(const MlpModel&, const MlpModel&) = default;

private:
	std::vector<int> sizes_;
	std::vector<DenseLayer> layers_;
};

/// Single encoded input -> sigmoid outputs in (0, 1).
Eigen::VectorXd forward(const MlpModel& model, const Eigen::VectorXd& x);
/// Column-batched forward pass on encoded inputs.
Eigen::MatrixXd forward_batch(const MlpModel& model, const Eigen::MatrixXd& x);

/// Half-MSE between decoded outputs and raw targets; inputs are raw
/// magnetizations (encoded internally).
double loss(const MlpModel& model, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets);
double loss(const MlpModel& model, const TrainingPairs& pairs);

struct Gradient
{
	std::vector<Eigen::MatrixXd> weights;
	std::vector<Eigen::VectorXd> bias;

	[[nodiscard]] Eigen::VectorXd flatten() const;
};

/// Exact backpropagated gradient of `loss`; optionally returns the loss too.
Gradient gradient(const MlpModel& model, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets, double* loss_out = nullptr);
Gradient gradient(const MlpModel& model, const TrainingPairs& pairs);

struct TrainConfig
{
	std::vector<int> hidden{200, 200};
	std::size_t epochs = 50000;
	std::size_t checkpoint_every = 100;
	double alpha = 1e-3;
	double beta1 = 0.9;
	double beta2 = 0.999;
	double epsilon_adam = 1e-8;
	std::size_t batch_size = 0; // 0: full batch
	std::uint64_t seed = 0;
	double validation_fraction = 0.2;

	void validate() const;
	[[nodiscard]] nlohmann::json to_json() const;
	[[nodiscard]] std::string hash() const;
};

struct CheckpointEntry
{
	std::size_t epoch;
	double train_loss;
	double validation_loss; // equals train_loss when no validation split

	friend bool operator==(const CheckpointEntry&, const CheckpointEntry&) = default;
};

struct TrainResult
{
	MlpModel model;                    // parameters of the selected checkpoint
	std::vector<CheckpointEntry> log;  // epoch 0 and every checkpoint_every epochs
	std::size_t best_epoch = 0;
	double best_validation_loss = 0.0;
	double best_train_loss = 0.0;
	std::vector<PairKey> validation_keys;
	std::string train_config_hash;
};

/// Validation split: per initial state, round(fraction * times) of its time
/// indices chosen by a seeded shuffle.
std::vector<bool> validation_mask(const std::vector<PairKey>& keys, double fraction, std::uint64_t seed);

TrainResult train(const TrainingPairs& pairs, const TrainConfig& cfg);

/// Applies the network to every (init, time) of an eval_noisy dataset and
/// returns z-magnetization records with role mitigated.
ObservationDataset mitigate(const MlpModel& model, const ObservationDataset& noisy, bool require_eval_role = true);

inline constexpr int kCheckpointFormatVersion = 1;

struct Checkpoint
{
	MlpModel model;
	std::string train_config_hash;
	std::size_t best_epoch = 0;
	double best_validation_loss = 0.0;
	std::string config_hash;
	std::string lineage_hash;
	nlohmann::json train_config = nlohmann::json::object();

	friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

Checkpoint make_checkpoint(const TrainResult& result, const TrainConfig& cfg);
nlohmann::json checkpoint_to_json(const Checkpoint& cp);
Checkpoint checkpoint_from_json(const nlohmann::json& j);
void save_checkpoint(const Checkpoint& cp, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// epoch,train_loss,validation_loss
std::string loss_log_csv(const std::vector<CheckpointEntry>& log);

} // namespace qmit
