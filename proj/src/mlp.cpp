#include <cmath>
#include <numeric>
#include <string>

#include "finsent/errors.hpp"
#include "finsent/regressors.hpp"
#include "finsent/rng.hpp"

namespace finsent {

double MlpModel::predict_raw(std::span<const double> row) const {
    const size_t h = hidden_size();
    double out = output_bias;
    for (size_t j = 0; j < h; ++j) {
        const double z = dot(hidden_weights.row(j), row) + hidden_bias[j];
        out += output_weights[j] * std::tanh(z);
    }
    return out;
}

size_t MlpModel::parameter_count() const {
    return hidden_size() * dims() + hidden_size() + hidden_size() + 1;
}

std::vector<double> MlpModel::parameters() const {
    std::vector<double> theta;
    theta.reserve(parameter_count());
    theta.insert(theta.end(), hidden_weights.data().begin(),
                 hidden_weights.data().end());
    theta.insert(theta.end(), hidden_bias.begin(), hidden_bias.end());
    theta.insert(theta.end(), output_weights.begin(), output_weights.end());
    theta.push_back(output_bias);
    return theta;
}

void MlpModel::set_parameters(std::span<const double> theta) {
    if (theta.size() != parameter_count())
        throw DimensionError("expected " + std::to_string(parameter_count()) +
                             " mlp parameters, got " + std::to_string(theta.size()));
    size_t at = 0;
    for (double& w : hidden_weights.data()) w = theta[at++];
    for (double& b : hidden_bias) b = theta[at++];
    for (double& w : output_weights) w = theta[at++];
    output_bias = theta[at];
}

double MlpModel::batch_loss(const DenseDataset& data,
                            std::span<const size_t> indices) const {
    if (indices.empty()) throw Error("mlp batch is empty");
    double loss = 0.0;
    for (size_t i : indices) {
        const double diff = predict_raw(data.row(i)) - data.y[i];
        loss += diff * diff;
    }
    return loss / static_cast<double>(indices.size());
}

double MlpModel::batch_loss_and_gradient(const DenseDataset& data,
                                         std::span<const size_t> indices,
                                         std::vector<double>& grad) const {
    if (indices.empty()) throw Error("mlp batch is empty");
    const size_t h = hidden_size();
    const size_t d = dims();
    grad.assign(parameter_count(), 0.0);
    // Flattened layout mirrors parameters(): W, hidden bias, output
    // weights, output bias.
    double* grad_w = grad.data();
    double* grad_hb = grad_w + h * d;
    double* grad_ow = grad_hb + h;
    double* grad_ob = grad_ow + h;

    std::vector<double> activation(h);
    double loss = 0.0;
    const double scale = 1.0 / static_cast<double>(indices.size());
    for (size_t i : indices) {
        std::span<const double> row = data.row(i);
        double out = output_bias;
        for (size_t j = 0; j < h; ++j) {
            activation[j] = std::tanh(dot(hidden_weights.row(j), row) + hidden_bias[j]);
            out += output_weights[j] * activation[j];
        }
        const double diff = out - data.y[i];
        loss += diff * diff * scale;

        const double dout = 2.0 * diff * scale;
        *grad_ob += dout;
        for (size_t j = 0; j < h; ++j) {
            grad_ow[j] += dout * activation[j];
            const double dz = dout * output_weights[j] *
                              (1.0 - activation[j] * activation[j]);
            grad_hb[j] += dz;
            for (size_t k = 0; k < d; ++k) grad_w[j * d + k] += dz * row[k];
        }
    }
    return loss;
}

MlpModel train_mlp(const DenseDataset& data, const MlpParams& params) {
    data.validate();
    if (params.hidden_size < 1)
        throw ConfigError("mlp hidden_size must be at least 1");
    if (params.learning_rate <= 0.0)
        throw ConfigError("mlp learning_rate must be positive");
    if (params.momentum < 0.0 || params.momentum >= 1.0)
        throw ConfigError("mlp momentum must lie in [0, 1)");
    if (params.epochs < 0) throw ConfigError("mlp epochs must not be negative");
    if (params.batch_size < 1)
        throw ConfigError("mlp batch_size must be at least 1");

    const size_t n = data.size();
    const size_t h = static_cast<size_t>(params.hidden_size);

    MlpModel model;
    model.params = params;
    model.hidden_weights = Matrix(h, data.dims);
    model.hidden_bias.assign(h, 0.0);
    model.output_weights.assign(h, 0.0);
    model.output_bias = 0.0;

    Rng rng(params.seed);
    const double bound = 1.0 / std::sqrt(static_cast<double>(data.dims));
    for (double& w : model.hidden_weights.data()) w = rng.uniform(-bound, bound);

    std::vector<size_t> all(n);
    std::iota(all.begin(), all.end(), size_t{0});

    std::vector<double> theta = model.parameters();
    std::vector<double> best_theta = theta;
    double best_loss = model.batch_loss(data, all);

    std::vector<double> velocity(theta.size(), 0.0);
    std::vector<double> grad;
    std::vector<size_t> order = all;
    const size_t batch = std::min<size_t>(params.batch_size, n);

    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        rng.shuffle(order);
        for (size_t start = 0; start < n; start += batch) {
            const size_t count = std::min(batch, n - start);
            std::span<const size_t> slice(order.data() + start, count);
            model.batch_loss_and_gradient(data, slice, grad);
            for (size_t p = 0; p < theta.size(); ++p) {
                velocity[p] = params.momentum * velocity[p] -
                              params.learning_rate * grad[p];
                theta[p] += velocity[p];
            }
            model.set_parameters(theta);
        }
        const double epoch_loss = model.batch_loss(data, all);
        if (!std::isfinite(epoch_loss))
            throw DivergenceError("mlp training loss became non-finite at epoch " +
                                  std::to_string(epoch + 1) +
                                  "; lower the learning rate");
        if (epoch_loss < best_loss) {
            best_loss = epoch_loss;
            best_theta = theta;
        }
    }
    model.set_parameters(best_theta);
    return model;
}

}  // namespace finsent
