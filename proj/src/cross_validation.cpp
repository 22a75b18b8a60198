#include "finsent/cross_validation.hpp"

#include <numeric>
#include <variant>

#include "finsent/errors.hpp"
#include "finsent/metrics.hpp"
#include "finsent/rng.hpp"

namespace finsent {

namespace {

using AnyModel = std::variant<RandomForestModel, SvrModel, MlpModel>;

AnyModel train_any(const DenseDataset& data, const RegressorParams& params) {
    switch (kind_of(params)) {
        case RegressorKind::RandomForest:
            return train_random_forest(data, std::get<RandomForestParams>(params));
        case RegressorKind::Svr:
            return train_svr(data, std::get<SvrParams>(params));
        case RegressorKind::Mlp:
            return train_mlp(data, std::get<MlpParams>(params));
    }
    throw ConfigError("unknown regressor kind");
}

double predict_any(const AnyModel& model, std::span<const double> row) {
    double raw = 0.0;
    if (const auto* rf = std::get_if<RandomForestModel>(&model))
        raw = rf->predict_raw(row);
    else if (const auto* svr = std::get_if<SvrModel>(&model))
        raw = svr->predict_raw(row);
    else
        raw = std::get<MlpModel>(model).predict_raw(row);
    return clip_score(raw);
}

}  // namespace

CvResult cross_validate(const DenseDataset& data,
                        const std::vector<RegressorParams>& grid, int folds,
                        uint64_t seed) {
    data.validate();
    if (grid.empty()) throw ConfigError("cross-validation grid is empty");
    if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
    const size_t n = data.size();
    if (n < static_cast<size_t>(folds))
        throw SplitError("cannot split " + std::to_string(n) + " rows into " +
                         std::to_string(folds) + " folds; use fewer folds");

    // One shuffle shared by every grid cell, so all cells see identical folds.
    std::vector<size_t> shuffled(n);
    std::iota(shuffled.begin(), shuffled.end(), size_t{0});
    Rng rng(seed);
    rng.shuffle(shuffled);
    std::vector<int> fold_of(n);
    for (size_t i = 0; i < n; ++i) fold_of[shuffled[i]] = static_cast<int>(i % folds);

    CvResult result;
    result.cells.reserve(grid.size());
    for (const RegressorParams& params : grid) {
        CvCellResult cell;
        cell.params = params;
        for (int f = 0; f < folds; ++f) {
            DenseDataset train;
            train.dims = data.dims;
            std::vector<size_t> held_out;
            for (size_t i = 0; i < n; ++i) {
                if (fold_of[i] == f)
                    held_out.push_back(i);
                else
                    train.add_row(data.row(i), data.y[i]);
            }
            AnyModel model = train_any(train, params);
            std::vector<double> gold, pred;
            gold.reserve(held_out.size());
            pred.reserve(held_out.size());
            for (size_t i : held_out) {
                gold.push_back(data.y[i]);
                pred.push_back(predict_any(model, data.row(i)));
            }
            CvFoldScore score;
            score.cosine = cosine_score(gold, pred);
            score.mae = mean_absolute_error(gold, pred);
            cell.folds.push_back(score);
        }
        for (const CvFoldScore& s : cell.folds) {
            cell.mean_cosine += s.cosine;
            cell.mean_mae += s.mae;
        }
        cell.mean_cosine /= static_cast<double>(cell.folds.size());
        cell.mean_mae /= static_cast<double>(cell.folds.size());
        result.cells.push_back(std::move(cell));
    }

    result.best_index = 0;
    for (size_t i = 1; i < result.cells.size(); ++i) {
        const CvCellResult& cand = result.cells[i];
        const CvCellResult& best = result.cells[result.best_index];
        if (cand.mean_cosine > best.mean_cosine ||
            (cand.mean_cosine == best.mean_cosine && cand.mean_mae < best.mean_mae))
            result.best_index = i;
    }
    return result;
}

}  // namespace finsent
