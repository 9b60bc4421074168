#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "decompleak/series.hpp"

namespace decompleak {

enum class ModelKind { Persistence, Ridge, Mlp };
enum class OptimizerKind { Adagrad, Adam };
enum class LossKind { MSE, MAE };

std::string_view to_string(ModelKind k) noexcept;
std::string_view to_string(OptimizerKind k) noexcept;
std::string_view to_string(LossKind k) noexcept;
ModelKind parse_model_kind(std::string_view s);
OptimizerKind parse_optimizer(std::string_view s);
LossKind parse_loss(std::string_view s);

struct TrainConfig {
    std::size_t max_epochs = 1000;
    std::size_t batch_size = 32;
    double learning_rate = 1e-4;
    OptimizerKind optimizer = OptimizerKind::Adagrad;
    std::size_t patience = 30;
    double validation_fraction = 0.10;
    LossKind loss = LossKind::MSE;
    std::uint64_t seed = 0;
    /// MLP hidden widths; an empty list gives a purely linear model.
    std::vector<std::size_t> hidden{64, 64, 64};
    double ridge_lambda = 1e-4;
    /// Hold out the last windows instead of a random subset.
    bool chronological_validation = false;

    void validate() const;
};

/// Returns the last value of the window.
double persistence_predict(std::span<const double> window);

/// Persistence on a flattened multi-channel window reads the raw channel (channel 0).
struct PersistenceParams {
    std::size_t window = 0;
    std::size_t channels = 1;
};

struct RidgeParams {
    std::vector<double> coef;
    double intercept = 0.0;
};

/// Fully connected net: ReLU hidden layers and a linear scalar head. All parameters live in
/// one flat vector, per layer the weight matrix (out x in, row-major) followed by the bias.
class MlpParams {
public:
    using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    MlpParams() = default;
    MlpParams(std::size_t input_dim, std::vector<std::size_t> hidden);

    /// He-uniform hidden weights, Glorot-uniform head, zero biases.
    static MlpParams initialise(std::size_t input_dim, std::vector<std::size_t> hidden,
                                std::uint64_t seed);

    std::size_t input_dim() const noexcept { return input_dim_; }
    const std::vector<std::size_t>& hidden() const noexcept { return hidden_; }
    std::size_t layer_count() const noexcept { return hidden_.size() + 1; }
    std::size_t fan_in(std::size_t layer) const noexcept;
    std::size_t fan_out(std::size_t layer) const noexcept;

    Eigen::Map<const RowMatrix> weight(std::size_t layer) const;
    Eigen::Map<RowMatrix> weight(std::size_t layer);
    Eigen::Map<const Eigen::VectorXd> bias(std::size_t layer) const;
    Eigen::Map<Eigen::VectorXd> bias(std::size_t layer);

    Eigen::VectorXd& values() noexcept { return values_; }
    const Eigen::VectorXd& values() const noexcept { return values_; }

private:
    std::size_t input_dim_ = 0;
    std::vector<std::size_t> hidden_;
    std::vector<std::size_t> offsets_; // start of each layer's weights
    Eigen::VectorXd values_;
};

using ModelParams = std::variant<PersistenceParams, RidgeParams, MlpParams>;

RidgeParams ridge_fit(const WindowSet& samples, double lambda);
RidgeParams ridge_fit(std::span<const double> inputs, std::span<const double> targets,
                      std::size_t dim, double lambda);

double mlp_forward(const MlpParams& params, std::span<const double> window);
/// Batched forward pass over row-major inputs (rows x input_dim).
std::vector<double> mlp_forward_batch(const MlpParams& params, std::span<const double> inputs);
/// Exact gradient of the mean batch loss; `loss` receives that mean loss when non-null.
Eigen::VectorXd mlp_gradient(const MlpParams& params, std::span<const double> inputs,
                             std::span<const double> targets, LossKind loss_kind,
                             double* loss = nullptr);

struct AdamState {
    Eigen::VectorXd m;
    Eigen::VectorXd v;
    std::size_t step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdagradState {
    Eigen::VectorXd accum;
    double eps = 1e-8;
};

void adam_step(AdamState& state, Eigen::VectorXd& params, const Eigen::VectorXd& grad, double lr);
void adagrad_step(AdagradState& state, Eigen::VectorXd& params, const Eigen::VectorXd& grad,
                  double lr);

struct TrainingHistory {
    std::vector<double> train_loss;
    std::vector<double> val_loss;
    std::vector<double> test_loss; // empty unless test windows were supplied
    std::size_t best_epoch = 0;

    std::size_t epochs() const noexcept { return train_loss.size(); }
};

struct TrainResult {
    ModelParams params;
    TrainingHistory history;
};

double predict(const ModelParams& params, std::span<const double> window);
std::vector<double> predict(const ModelParams& params, const WindowSet& windows);

/// Mean loss of `params` on `windows`.
double evaluate_loss(const ModelParams& params, const WindowSet& windows, LossKind loss);

/// Fits a model. A validation_fraction share of windows is held out (randomly, by seed) for
/// early stopping; the returned parameters are those of the best validation epoch. When `test`
/// is given its loss is recorded per epoch for plotting only.
TrainResult train(ModelKind kind, const WindowSet& windows, const TrainConfig& cfg,
                  const WindowSet* test = nullptr);

/// Versioned JSON document with layer shapes, row-major values and per-epoch history.
std::string to_json(const ModelParams& params, const TrainingHistory& history);
TrainResult from_json(std::string_view json);

} // namespace decompleak
