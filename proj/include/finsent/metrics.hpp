#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "finsent/dataset.hpp"

namespace finsent {

struct EvalReport {
    double cosine = 0.0;
    double mae = 0.0;
    size_t count = 0;
    std::vector<double> per_instance_error;  // pred - gold, signed
    bool zero_norm_flagged = false;

    // Flat key=value block ("cosine=...", "mae=...", "count=...").
    std::string to_text() const;
};

// Cosine of the gold and predicted score vectors. A zero-norm vector gives
// 0.0 and sets *flagged. Throws Error on empty or mismatched lengths.
double cosine_score(std::span<const double> gold, std::span<const double> pred,
                    bool* flagged = nullptr);

// Mean absolute error. Same input contract as cosine_score.
double mean_absolute_error(std::span<const double> gold,
                           std::span<const double> pred);

EvalReport evaluate_predictions(std::span<const double> gold,
                                std::span<const double> pred);

struct ValidationSplit {
    std::vector<LabeledInstance> train;
    std::vector<LabeledInstance> validation;
};

// 80/20 split that tracks the score distribution: instances are sorted
// ascending by gold score (stable, ties by original position) and every
// fifth one (positions 4, 9, 14, ... of the sorted order) goes to
// validation. Requires N >= 5 and gold scores on every instance.
ValidationSplit make_validation_split(const std::vector<LabeledInstance>& instances);

}  // namespace finsent
