#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "finsent/cross_validation.hpp"
#include "finsent/dataset.hpp"
#include "finsent/embedding.hpp"
#include "finsent/features.hpp"
#include "finsent/lexicon.hpp"
#include "finsent/metrics.hpp"
#include "finsent/regressors.hpp"
#include "finsent/textprep.hpp"

namespace finsent {

// Everything an experiment needs: which blocks to build, which regressor to
// tune, and where the supporting resources live. Loaded from a flat
// key=value file; any key can be overridden on the command line.
struct ExperimentConfig {
    Genre genre = Genre::Microblog;
    FeatureBlocks blocks = kBlockBow | kBlockLex | kBlockBoe;
    RegressorKind regressor = RegressorKind::RandomForest;
    // Grid axes by parameter name; the cartesian product (keys in name
    // order, values in listed order) forms the CV grid. Empty = defaults.
    std::map<std::string, std::vector<double>> grid;
    std::string embeddings_path;
    std::vector<std::string> lexicon_paths;
    std::string stopwords_path;
    std::string aliases_path;
    bool stopword_removal = true;
    int ngram_max = 1;
    int folds = 10;
    uint64_t seed = 1;

    // ConfigError when BoE lacks an embeddings path, Lex lacks lexicon
    // paths, no block is enabled, or numeric settings are out of range.
    void validate() const;
};

// "key = value" lines, '#' comments, later keys win. `overrides` (the
// --set flags) are applied on top. Unknown keys raise ConfigError.
ExperimentConfig load_experiment_config(
    const std::string& path, const std::vector<std::string>& overrides = {});

// Applies "key=value" strings to an existing config.
void apply_config_overrides(ExperimentConfig& config,
                            const std::vector<std::string>& overrides);

std::vector<RegressorParams> expand_grid(
    RegressorKind kind, const std::map<std::string, std::vector<double>>& grid);

// A trained experiment bundles the regressor with every artifact needed to
// featurize unseen text the same way the training data was featurized.
struct TrainedExperiment {
    ExperimentConfig config;
    NormalizationConfig normalization;
    Vocabulary bow_vocab;
    Lexicon lexicon;
    std::optional<EmbeddingMatrix> embeddings;
    FeatureLayout layout;
    Model model;
    CvResult cv;
};

// The instance's own company string joins the alias list for its
// preprocessing, so the target company is obfuscated even when the global
// alias file does not mention it.
TokenizedDocument preprocess_instance(const LabeledInstance& instance,
                                      const NormalizationConfig& config);

// preprocess -> fit BoW vocabulary on the training split -> featurize ->
// cross-validate the grid -> refit on the full split with the winner.
// Training instances must carry gold scores. Never reads test data.
TrainedExperiment run_training(const ExperimentConfig& config,
                               const std::vector<LabeledInstance>& train);

// Clipped scores, aligned with `instances`.
std::vector<double> predict_scores(const TrainedExperiment& experiment,
                                   const std::vector<LabeledInstance>& instances);

struct ExperimentOutcome {
    EvalReport report;
    std::vector<std::pair<std::string, double>> predictions;  // (id, score)
    CvResult cv;
};

// Full protocol against an already-loaded train/test pair. Test instances
// must carry gold scores (use predict_scores for unscored data).
ExperimentOutcome run_experiment(const ExperimentConfig& config,
                                 const std::vector<LabeledInstance>& train,
                                 const std::vector<LabeledInstance>& test);

// File-level wrapper: loads both datasets, runs the experiment, writes the
// predictions file (JSON-lines id/score) when `predictions_out` is
// non-empty.
ExperimentOutcome run_experiment_files(const ExperimentConfig& config,
                                       const std::string& train_path,
                                       const std::string& test_path,
                                       const std::string& predictions_out);

struct AblationRow {
    std::string label;
    FeatureBlocks blocks = 0;
    EvalReport report;
};

// The seven block subsets, in fixed order: Lex, BoE, BoW, BoE+Lex,
// BoW+Lex, BoW+BoE, All. Shares the config's seed and folds across rows.
// Requires resources for all three blocks.
std::vector<AblationRow> run_ablation(const ExperimentConfig& config,
                                      const std::vector<LabeledInstance>& train,
                                      const std::vector<LabeledInstance>& test);

std::string ablation_table_text(const std::vector<AblationRow>& rows);
void write_ablation_csv(const std::vector<AblationRow>& rows,
                        const std::string& path);

// Self-contained pipeline-model file: normalization resources, BoW
// vocabulary, lexicon, embeddings and the regressor, so `predict` needs
// nothing but this file. The cv field is not persisted.
void save_experiment(const TrainedExperiment& experiment, const std::string& path);
TrainedExperiment load_experiment(const std::string& path);

}  // namespace finsent
