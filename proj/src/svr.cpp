#include <cmath>
#include <numeric>
#include <string>

#include "finsent/errors.hpp"
#include "finsent/matrix.hpp"
#include "finsent/regressors.hpp"
#include "finsent/rng.hpp"

namespace finsent {

double SvrModel::predict_raw(std::span<const double> row) const {
    return dot(std::span<const double>(weights), row) + bias;
}

double svr_objective(const SvrModel& model, const DenseDataset& data) {
    const size_t n = data.size();
    double loss = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double residual = std::abs(model.predict_raw(data.row(i)) - data.y[i]);
        loss += std::max(0.0, residual - model.params.epsilon);
    }
    loss /= static_cast<double>(n);
    double norm_sq = 0.0;
    for (double w : model.weights) norm_sq += w * w;
    return loss + norm_sq / (2.0 * model.params.regularization_c *
                             static_cast<double>(n));
}

SvrModel train_svr(const DenseDataset& data, const SvrParams& params) {
    data.validate();
    if (params.epsilon < 0.0) throw ConfigError("svr epsilon must not be negative");
    if (params.regularization_c <= 0.0)
        throw ConfigError("svr c must be positive");
    if (params.epochs < 0) throw ConfigError("svr epochs must not be negative");
    if (params.learning_rate <= 0.0)
        throw ConfigError("svr learning_rate must be positive");

    const size_t n = data.size();
    SvrModel model;
    model.params = params;
    model.weights.assign(data.dims, 0.0);
    model.bias = std::accumulate(data.y.begin(), data.y.end(), 0.0) /
                 static_cast<double>(n);

    SvrModel best = model;
    double best_objective = svr_objective(model, data);

    Rng rng(params.seed);
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});

    const double total_updates =
        std::max(1.0, static_cast<double>(params.epochs) * static_cast<double>(n));
    const double floor_rate = params.learning_rate * 1e-4;
    size_t updates_done = 0;

    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        rng.shuffle(order);
        for (size_t i : order) {
            double rate = params.learning_rate *
                          (1.0 - static_cast<double>(updates_done) / total_updates);
            rate = std::max(rate, floor_rate);
            ++updates_done;

            const double residual = model.predict_raw(data.row(i)) - data.y[i];
            // Regularization shrink, clamped so a large rate/(c*n) zeroes the
            // weights instead of flipping their sign.
            const double shrink = std::max(
                0.0, 1.0 - rate / (params.regularization_c * static_cast<double>(n)));
            for (double& w : model.weights) w *= shrink;
            if (std::abs(residual) > params.epsilon) {
                const double step = residual > 0.0 ? rate : -rate;
                std::span<const double> row = data.row(i);
                for (size_t d = 0; d < data.dims; ++d) model.weights[d] -= step * row[d];
                model.bias -= step;
            }
        }
        const double objective = svr_objective(model, data);
        if (!std::isfinite(objective))
            throw DivergenceError("svr objective became non-finite at epoch " +
                                  std::to_string(epoch + 1) +
                                  "; lower the learning rate");
        if (objective < best_objective) {
            best_objective = objective;
            best = model;
        }
    }
    return best;
}

}  // namespace finsent
