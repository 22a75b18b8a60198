#include "finsent/regressors.hpp"

#include <algorithm>
#include <cmath>

#include "finsent/errors.hpp"

namespace finsent {

const std::string& regressor_name(RegressorKind kind) {
    static const std::string names[] = {"random_forest", "svr", "mlp"};
    return names[static_cast<int>(kind)];
}

RegressorKind regressor_from_name(const std::string& name) {
    if (name == "random_forest" || name == "rf") return RegressorKind::RandomForest;
    if (name == "svr") return RegressorKind::Svr;
    if (name == "mlp") return RegressorKind::Mlp;
    throw ConfigError("unknown regressor '" + name +
                      "' (expected random_forest, svr or mlp)");
}

void DenseDataset::add_row(std::span<const double> row, double target) {
    if (dims == 0 && x.empty()) dims = row.size();
    if (row.size() != dims)
        throw DimensionError("row has " + std::to_string(row.size()) +
                             " values, dataset holds " + std::to_string(dims));
    x.insert(x.end(), row.begin(), row.end());
    y.push_back(target);
}

void DenseDataset::validate() const {
    if (y.empty()) throw Error("dataset is empty");
    if (dims == 0) throw Error("dataset rows have zero dimensions");
    if (x.size() != y.size() * dims)
        throw DimensionError("dataset storage is inconsistent: " +
                             std::to_string(x.size()) + " values for " +
                             std::to_string(y.size()) + " rows of width " +
                             std::to_string(dims));
    for (size_t i = 0; i < y.size(); ++i)
        if (!std::isfinite(y[i]))
            throw Error("non-finite target at row " + std::to_string(i));
    for (double v : x)
        if (!std::isfinite(v)) throw Error("non-finite feature value");
}

const FeatureLayout& TrainingSet::layout() const {
    if (features.empty()) throw Error("training set is empty");
    return features.front().layout;
}

DenseDataset TrainingSet::to_dense() const {
    validate();
    DenseDataset data;
    data.dims = layout().total_dimension();
    data.x.reserve(size() * data.dims);
    data.y = targets;
    for (const FeatureVector& f : features) {
        std::vector<double> dense = f.to_dense();
        data.x.insert(data.x.end(), dense.begin(), dense.end());
    }
    return data;
}

void TrainingSet::validate() const {
    if (features.empty()) throw Error("training set is empty");
    if (features.size() != targets.size())
        throw DimensionError(std::to_string(features.size()) + " feature rows vs " +
                             std::to_string(targets.size()) + " targets");
    const FeatureLayout& base = features.front().layout;
    for (size_t i = 1; i < features.size(); ++i)
        if (!(features[i].layout == base))
            throw DimensionError("feature layout differs at row " + std::to_string(i));
    for (size_t i = 0; i < targets.size(); ++i) {
        if (!std::isfinite(targets[i]) || targets[i] < -1.0 || targets[i] > 1.0)
            throw Error("target at row " + std::to_string(i) +
                        " is outside [-1, +1]");
    }
}

RegressorKind kind_of(const RegressorParams& params) {
    if (std::holds_alternative<RandomForestParams>(params))
        return RegressorKind::RandomForest;
    if (std::holds_alternative<SvrParams>(params)) return RegressorKind::Svr;
    return RegressorKind::Mlp;
}

RegressorParams default_params(RegressorKind kind) {
    switch (kind) {
        case RegressorKind::RandomForest: return RandomForestParams{};
        case RegressorKind::Svr: return SvrParams{};
        case RegressorKind::Mlp: return MlpParams{};
    }
    throw ConfigError("unknown regressor kind");
}

std::map<std::string, double> params_to_map(const RegressorParams& params) {
    std::map<std::string, double> out;
    if (const auto* rf = std::get_if<RandomForestParams>(&params)) {
        out["trees"] = rf->trees_count;
        out["max_depth"] = rf->max_depth;
        out["min_samples_leaf"] = rf->min_samples_leaf;
        out["features_per_split"] = rf->features_per_split;
        out["bootstrap"] = rf->bootstrap ? 1.0 : 0.0;
        out["seed"] = static_cast<double>(rf->seed);
    } else if (const auto* svr = std::get_if<SvrParams>(&params)) {
        out["epsilon"] = svr->epsilon;
        out["c"] = svr->regularization_c;
        out["epochs"] = svr->epochs;
        out["learning_rate"] = svr->learning_rate;
        out["seed"] = static_cast<double>(svr->seed);
    } else {
        const auto& mlp = std::get<MlpParams>(params);
        out["hidden_size"] = mlp.hidden_size;
        out["learning_rate"] = mlp.learning_rate;
        out["momentum"] = mlp.momentum;
        out["epochs"] = mlp.epochs;
        out["batch_size"] = mlp.batch_size;
        out["seed"] = static_cast<double>(mlp.seed);
    }
    return out;
}

namespace {

int as_int(const std::string& key, double v) {
    if (v != std::floor(v))
        throw ConfigError("parameter '" + key + "' must be an integer");
    return static_cast<int>(v);
}

}  // namespace

RegressorParams params_from_map(RegressorKind kind,
                                const std::map<std::string, double>& values) {
    RegressorParams params = default_params(kind);
    for (const auto& [key, value] : values) {
        if (auto* rf = std::get_if<RandomForestParams>(&params)) {
            if (key == "trees") rf->trees_count = as_int(key, value);
            else if (key == "max_depth") rf->max_depth = as_int(key, value);
            else if (key == "min_samples_leaf") rf->min_samples_leaf = as_int(key, value);
            else if (key == "features_per_split") rf->features_per_split = as_int(key, value);
            else if (key == "bootstrap") rf->bootstrap = value != 0.0;
            else if (key == "seed") rf->seed = static_cast<uint64_t>(value);
            else throw ConfigError("unknown random_forest parameter '" + key + "'");
        } else if (auto* svr = std::get_if<SvrParams>(&params)) {
            if (key == "epsilon") svr->epsilon = value;
            else if (key == "c") svr->regularization_c = value;
            else if (key == "epochs") svr->epochs = as_int(key, value);
            else if (key == "learning_rate") svr->learning_rate = value;
            else if (key == "seed") svr->seed = static_cast<uint64_t>(value);
            else throw ConfigError("unknown svr parameter '" + key + "'");
        } else {
            auto& mlp = std::get<MlpParams>(params);
            if (key == "hidden_size") mlp.hidden_size = as_int(key, value);
            else if (key == "learning_rate") mlp.learning_rate = value;
            else if (key == "momentum") mlp.momentum = value;
            else if (key == "epochs") mlp.epochs = as_int(key, value);
            else if (key == "batch_size") mlp.batch_size = as_int(key, value);
            else if (key == "seed") mlp.seed = static_cast<uint64_t>(value);
            else throw ConfigError("unknown mlp parameter '" + key + "'");
        }
    }
    return params;
}

double clip_score(double raw) { return std::clamp(raw, -1.0, 1.0); }

namespace {

size_t model_dims(const Model& model) {
    if (const auto* rf = std::get_if<RandomForestModel>(&model.impl)) return rf->dims;
    if (const auto* svr = std::get_if<SvrModel>(&model.impl))
        return svr->weights.size();
    return std::get<MlpModel>(model.impl).dims();
}

}  // namespace

double Model::predict(const FeatureVector& features) const {
    if (!(features.layout == layout))
        throw DimensionError("feature layout does not match the model layout");
    std::vector<double> dense = features.to_dense();
    return predict_dense(dense);
}

double Model::predict_dense(std::span<const double> row) const {
    if (row.size() != model_dims(*this))
        throw DimensionError("input has " + std::to_string(row.size()) +
                             " dimensions, model expects " +
                             std::to_string(model_dims(*this)));
    double raw = 0.0;
    if (const auto* rf = std::get_if<RandomForestModel>(&impl))
        raw = rf->predict_raw(row);
    else if (const auto* svr = std::get_if<SvrModel>(&impl))
        raw = svr->predict_raw(row);
    else
        raw = std::get<MlpModel>(impl).predict_raw(row);
    return clip_score(raw);
}

Model train_model(const TrainingSet& data, const RegressorParams& params) {
    DenseDataset dense = data.to_dense();
    Model model;
    model.kind = kind_of(params);
    model.layout = data.layout();
    switch (model.kind) {
        case RegressorKind::RandomForest:
            model.impl = train_random_forest(dense, std::get<RandomForestParams>(params));
            break;
        case RegressorKind::Svr:
            model.impl = train_svr(dense, std::get<SvrParams>(params));
            break;
        case RegressorKind::Mlp:
            model.impl = train_mlp(dense, std::get<MlpParams>(params));
            break;
    }
    return model;
}

}  // namespace finsent
