#pragma once

#include <cstdint>
#include <vector>

#include "finsent/regressors.hpp"

namespace finsent {

struct CvFoldScore {
    double cosine = 0.0;
    double mae = 0.0;
};

struct CvCellResult {
    RegressorParams params;
    std::vector<CvFoldScore> folds;
    double mean_cosine = 0.0;
    double mean_mae = 0.0;
};

struct CvResult {
    std::vector<CvCellResult> cells;  // same order as the input grid
    size_t best_index = 0;

    const RegressorParams& best_params() const { return cells[best_index].params; }
};

// K-fold cross-validation over a parameter grid. Rows are dealt to folds by
// a seeded shuffle (shuffled position i lands in fold i % folds), held-out
// predictions are clipped to [-1, +1] and scored with cosine similarity and
// MAE against the held-out targets. The winner has the highest mean cosine;
// ties fall back to the lower mean MAE, then to grid order. Fewer rows than
// folds raises SplitError.
CvResult cross_validate(const DenseDataset& data,
                        const std::vector<RegressorParams>& grid, int folds,
                        uint64_t seed);

}  // namespace finsent
