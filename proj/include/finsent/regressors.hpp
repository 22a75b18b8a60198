#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "finsent/features.hpp"
#include "finsent/matrix.hpp"

namespace finsent {

enum class RegressorKind { RandomForest, Svr, Mlp };

const std::string& regressor_name(RegressorKind kind);
RegressorKind regressor_from_name(const std::string& name);

// Row-major N x dims design matrix with targets; what the trainers consume.
struct DenseDataset {
    size_t dims = 0;
    std::vector<double> x;
    std::vector<double> y;

    size_t size() const { return y.size(); }
    std::span<const double> row(size_t i) const { return {x.data() + i * dims, dims}; }
    void add_row(std::span<const double> row, double target);

    // N >= 1, row storage consistent, finite targets. Throws Error.
    void validate() const;
};

// Feature vectors plus targets in [-1, +1], all sharing one layout.
struct TrainingSet {
    std::vector<FeatureVector> features;
    std::vector<double> targets;

    size_t size() const { return targets.size(); }
    const FeatureLayout& layout() const;
    DenseDataset to_dense() const;
    void validate() const;
};

struct RandomForestParams {
    int trees_count = 200;
    int max_depth = -1;         // negative = unlimited; 0 = single-leaf stumps
    int min_samples_leaf = 1;
    int features_per_split = 0; // 0 = ceil(dims / 3)
    bool bootstrap = true;
    uint64_t seed = 1;
};

struct SvrParams {
    double epsilon = 0.1;
    double regularization_c = 1.0;
    int epochs = 100;
    double learning_rate = 0.01;
    uint64_t seed = 1;
};

struct MlpParams {
    int hidden_size = 100;
    double learning_rate = 0.01;
    double momentum = 0.9;
    int epochs = 200;
    int batch_size = 32;
    uint64_t seed = 1;
};

using RegressorParams = std::variant<RandomForestParams, SvrParams, MlpParams>;

RegressorKind kind_of(const RegressorParams& params);
RegressorParams default_params(RegressorKind kind);

// Named-value views of the parameter structs, used by the config-file grid
// machinery. Unknown names raise ConfigError.
std::map<std::string, double> params_to_map(const RegressorParams& params);
RegressorParams params_from_map(RegressorKind kind,
                                const std::map<std::string, double>& values);

// ---- Random forest ----

struct TreeNode {
    int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int32_t left = -1;
    int32_t right = -1;
    double value = 0.0;
};

struct RegressionTree {
    std::vector<TreeNode> nodes;  // root at index 0
    double predict(std::span<const double> row) const;
};

struct RandomForestModel {
    std::vector<RegressionTree> trees;
    RandomForestParams params;
    size_t dims = 0;
    double predict_raw(std::span<const double> row) const;  // mean over trees
};

// Bootstrap + random feature subsets, splits minimizing weighted child
// variance. With bootstrap off, one tree and all features it reduces to
// plain CART.
RandomForestModel train_random_forest(const DenseDataset& data,
                                      const RandomForestParams& params);

// ---- Linear epsilon-insensitive SVR ----

struct SvrModel {
    std::vector<double> weights;
    double bias = 0.0;
    SvrParams params;
    double predict_raw(std::span<const double> row) const;
};

// (1/N) sum max(0, |w.x_i + b - y_i| - eps) + ||w||^2 / (2 C N)
double svr_objective(const SvrModel& model, const DenseDataset& data);

// Deterministic epoch-shuffled subgradient descent from w=0, b=mean(y);
// returns the iterate with the lowest full objective, so the result is
// never worse than the start. Throws DivergenceError on non-finite values.
SvrModel train_svr(const DenseDataset& data, const SvrParams& params);

// ---- One-hidden-layer tanh MLP ----

struct MlpModel {
    Matrix hidden_weights;               // h x dims
    std::vector<double> hidden_bias;     // h
    std::vector<double> output_weights;  // h
    double output_bias = 0.0;
    MlpParams params;

    size_t dims() const { return hidden_weights.cols(); }
    size_t hidden_size() const { return hidden_weights.rows(); }
    double predict_raw(std::span<const double> row) const;

    // Flattened parameter order: hidden_weights, hidden_bias,
    // output_weights, output_bias.
    size_t parameter_count() const;
    std::vector<double> parameters() const;
    void set_parameters(std::span<const double> theta);

    // MSE over the index subset of `data`.
    double batch_loss(const DenseDataset& data,
                      std::span<const size_t> indices) const;
    // Also fills the flattened analytic gradient; the training step moves
    // along exactly this gradient.
    double batch_loss_and_gradient(const DenseDataset& data,
                                   std::span<const size_t> indices,
                                   std::vector<double>& grad) const;
};

// Minibatch SGD with momentum on mean squared error, seeded shuffling.
// Hidden weights start uniform +-1/sqrt(dims); the output layer starts at
// zero. Returns the epoch snapshot with the lowest training MSE.
MlpModel train_mlp(const DenseDataset& data, const MlpParams& params);

// ---- Unified model ----

double clip_score(double raw);  // into [-1, +1]

struct Model {
    RegressorKind kind = RegressorKind::RandomForest;
    FeatureLayout layout;
    std::variant<RandomForestModel, SvrModel, MlpModel> impl;

    // Raw regressor output clipped to [-1, +1]. Layout / dimension
    // mismatches raise DimensionError.
    double predict(const FeatureVector& features) const;
    double predict_dense(std::span<const double> row) const;
};

Model train_model(const TrainingSet& data, const RegressorParams& params);

// Self-describing text container (hexfloat payload, so predictions
// round-trip bit-exactly). Version or kind mismatches raise FormatError.
void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);
Model load_model(const std::string& path, RegressorKind expected_kind);

}  // namespace finsent
