#include "finsent/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "finsent/errors.hpp"

namespace finsent {

namespace {

void check_lengths(std::span<const double> gold, std::span<const double> pred) {
    if (gold.empty()) throw Error("metric input is empty");
    if (gold.size() != pred.size())
        throw Error("metric input length mismatch: " + std::to_string(gold.size()) +
                    " gold vs " + std::to_string(pred.size()) + " predicted");
}

}  // namespace

std::string EvalReport::to_text() const {
    char buf[128];
    std::string out;
    std::snprintf(buf, sizeof(buf), "cosine=%.6f\n", cosine);
    out += buf;
    std::snprintf(buf, sizeof(buf), "mae=%.6f\n", mae);
    out += buf;
    std::snprintf(buf, sizeof(buf), "count=%zu\n", count);
    out += buf;
    if (zero_norm_flagged) out += "zero_norm_flagged=1\n";
    return out;
}

double cosine_score(std::span<const double> gold, std::span<const double> pred,
                    bool* flagged) {
    check_lengths(gold, pred);
    double dot = 0.0, gg = 0.0, pp = 0.0;
    for (size_t i = 0; i < gold.size(); ++i) {
        dot += gold[i] * pred[i];
        gg += gold[i] * gold[i];
        pp += pred[i] * pred[i];
    }
    if (gg == 0.0 || pp == 0.0) {
        if (flagged) *flagged = true;
        return 0.0;
    }
    return dot / (std::sqrt(gg) * std::sqrt(pp));
}

double mean_absolute_error(std::span<const double> gold,
                           std::span<const double> pred) {
    check_lengths(gold, pred);
    double sum = 0.0;
    for (size_t i = 0; i < gold.size(); ++i) sum += std::abs(pred[i] - gold[i]);
    return sum / static_cast<double>(gold.size());
}

EvalReport evaluate_predictions(std::span<const double> gold,
                                std::span<const double> pred) {
    EvalReport report;
    report.cosine = cosine_score(gold, pred, &report.zero_norm_flagged);
    report.mae = mean_absolute_error(gold, pred);
    report.count = gold.size();
    report.per_instance_error.reserve(gold.size());
    for (size_t i = 0; i < gold.size(); ++i)
        report.per_instance_error.push_back(pred[i] - gold[i]);
    return report;
}

ValidationSplit make_validation_split(const std::vector<LabeledInstance>& instances) {
    const size_t n = instances.size();
    if (n < 5)
        throw SplitError("validation split needs at least 5 instances, got " +
                         std::to_string(n));
    for (const auto& inst : instances)
        if (!inst.gold_score)
            throw SplitError("validation split requires gold scores on every "
                             "instance (missing on id '" + inst.id + "')");

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        double sa = *instances[a].gold_score;
        double sb = *instances[b].gold_score;
        if (sa != sb) return sa < sb;
        return a < b;  // ties keep original order
    });

    ValidationSplit split;
    for (size_t pos = 0; pos < n; ++pos) {
        const LabeledInstance& inst = instances[order[pos]];
        if (pos % 5 == 4) split.validation.push_back(inst);
        else split.train.push_back(inst);
    }
    return split;
}

}  // namespace finsent
