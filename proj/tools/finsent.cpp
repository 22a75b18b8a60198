// Command-line surface for the financial sentiment toolkit: preprocessing,
// embedding training, analogy queries, experiment training/prediction/
// evaluation and the feature-ablation runner.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"

#include "finsent/cross_validation.hpp"
#include "finsent/dataset.hpp"
#include "finsent/embedding.hpp"
#include "finsent/errors.hpp"
#include "finsent/metrics.hpp"
#include "finsent/pipeline.hpp"
#include "finsent/regressors.hpp"
#include "finsent/textprep.hpp"

namespace {

using namespace finsent;

struct TextprepOptions {
    std::string stopwords_path;
    std::string aliases_path;
    bool keep_stopwords = false;

    NormalizationConfig build() const {
        NormalizationConfig config = NormalizationConfig::defaults();
        config.apply_stopword_removal = !keep_stopwords;
        if (!stopwords_path.empty()) config.stopwords = load_stopwords(stopwords_path);
        if (!aliases_path.empty())
            config.company_aliases = load_company_aliases(aliases_path);
        return config;
    }
};

void add_textprep_options(CLI::App* cmd, TextprepOptions& opts) {
    cmd->add_option("--stopwords", opts.stopwords_path,
                    "stopword list, one word per line");
    cmd->add_option("--aliases", opts.aliases_path,
                    "company alias list, one alias per line");
    cmd->add_flag("--no-stopword-removal", opts.keep_stopwords,
                  "keep stopwords in the output");
}

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string line;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i) line += ' ';
        line += tokens[i];
    }
    return line;
}

int cmd_preprocess(const TextprepOptions& opts, const std::vector<std::string>& text) {
    const NormalizationConfig config = opts.build();
    if (!text.empty()) {
        std::string joined = join_tokens(text);
        std::cout << join_tokens(preprocess(joined, config).tokens) << '\n';
        return 0;
    }
    std::string line;
    while (std::getline(std::cin, line))
        std::cout << join_tokens(preprocess(line, config).tokens) << '\n';
    return 0;
}

int cmd_train_embeddings(const TextprepOptions& opts, const std::string& corpus_path,
                         const std::string& out_path, const SkipgramConfig& config) {
    const NormalizationConfig norm = opts.build();
    std::ifstream in(corpus_path);
    if (!in) throw IoError("cannot open corpus file '" + corpus_path + "'");
    std::vector<TokenizedDocument> corpus;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        TokenizedDocument doc = preprocess(line, norm, std::to_string(line_no));
        if (!doc.tokens.empty()) corpus.push_back(std::move(doc));
    }
    std::cerr << "corpus: " << corpus.size() << " documents\n";

    SkipgramTrainResult result = train_skipgram(corpus, config);
    const Vocabulary& vocab = result.embeddings.vocabulary;
    std::cerr << "vocabulary: " << vocab.size() << " types, " << vocab.total_tokens()
              << " tokens (min_count " << config.min_count << ")\n";
    for (size_t e = 0; e < result.epoch_loss.size(); ++e) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "epoch %zu loss %.6f", e + 1,
                      result.epoch_loss[e]);
        std::cerr << buf << '\n';
    }
    save_embeddings(result.embeddings, out_path);
    std::cerr << "wrote " << out_path << '\n';
    return 0;
}

int cmd_analogy(const std::string& embeddings_path, const std::string& a,
                const std::string& b, const std::string& c, size_t top_k) {
    const EmbeddingMatrix matrix = load_embeddings(embeddings_path);
    for (const auto& [token, cosine] : analogy(a, b, c, matrix, top_k)) {
        char buf[32];
        std::snprintf(buf, sizeof buf, " %.6f", cosine);
        std::cout << token << buf << '\n';
    }
    return 0;
}

void print_cv_summary(const CvResult& cv) {
    for (size_t i = 0; i < cv.cells.size(); ++i) {
        const CvCellResult& cell = cv.cells[i];
        std::string desc;
        for (const auto& [key, value] : params_to_map(cell.params)) {
            if (!desc.empty()) desc += ' ';
            char buf[64];
            std::snprintf(buf, sizeof buf, "%s=%g", key.c_str(), value);
            desc += buf;
        }
        char buf[96];
        std::snprintf(buf, sizeof buf, "cv[%zu] cosine=%.6f mae=%.6f%s", i,
                      cell.mean_cosine, cell.mean_mae,
                      i == cv.best_index ? "  <- selected" : "");
        std::cout << buf << "  " << desc << '\n';
    }
}

int cmd_train(const std::string& config_path, const std::string& train_path,
              const std::string& out_model, const std::vector<std::string>& sets) {
    const ExperimentConfig config = load_experiment_config(config_path, sets);
    DatasetWarnings warnings;
    const std::vector<LabeledInstance> train =
        load_dataset(train_path, config.genre, &warnings);
    for (const std::string& id : warnings.duplicate_ids)
        std::cerr << "warning: duplicate id '" << id << "' in " << train_path << '\n';

    const TrainedExperiment experiment = run_training(config, train);
    print_cv_summary(experiment.cv);
    save_experiment(experiment, out_model);
    std::cout << "wrote " << out_model << '\n';
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& input_path,
                const std::string& out_path) {
    const TrainedExperiment experiment = load_experiment(model_path);
    DatasetWarnings warnings;
    const std::vector<LabeledInstance> instances =
        load_dataset(input_path, experiment.config.genre, &warnings);
    for (const std::string& id : warnings.duplicate_ids)
        std::cerr << "warning: duplicate id '" << id << "' in " << input_path << '\n';

    const std::vector<double> scores = predict_scores(experiment, instances);
    std::vector<std::pair<std::string, double>> predictions;
    predictions.reserve(instances.size());
    for (size_t i = 0; i < instances.size(); ++i)
        predictions.emplace_back(instances[i].id, scores[i]);
    save_predictions(predictions, out_path);
    std::cout << "wrote " << predictions.size() << " predictions to " << out_path
              << '\n';
    return 0;
}

int cmd_evaluate(const std::string& gold_path, const std::string& pred_path) {
    // Genre only matters for featurization; either value works for scoring.
    const std::vector<LabeledInstance> instances =
        load_dataset(gold_path, Genre::Microblog);
    std::unordered_map<std::string, double> by_id;
    for (const auto& [id, score] : load_predictions(pred_path)) by_id[id] = score;

    std::vector<double> gold, pred;
    gold.reserve(instances.size());
    pred.reserve(instances.size());
    for (const LabeledInstance& inst : instances) {
        if (!inst.gold_score)
            throw Error("gold instance '" + inst.id + "' has no score");
        auto it = by_id.find(inst.id);
        if (it == by_id.end())
            throw Error("no prediction for instance '" + inst.id + "'");
        gold.push_back(*inst.gold_score);
        pred.push_back(it->second);
    }
    const EvalReport report = evaluate_predictions(gold, pred);
    std::cout << report.to_text();
    if (report.zero_norm_flagged)
        std::cerr << "warning: zero-norm score vector, cosine reported as 0\n";
    return 0;
}

int cmd_ablate(const std::string& config_path, const std::string& train_path,
               const std::string& test_path, const std::string& out_path,
               const std::vector<std::string>& sets) {
    const ExperimentConfig config = load_experiment_config(config_path, sets);
    const std::vector<LabeledInstance> train = load_dataset(train_path, config.genre);
    const std::vector<LabeledInstance> test = load_dataset(test_path, config.genre);
    const std::vector<AblationRow> rows = run_ablation(config, train, test);
    write_ablation_csv(rows, out_path);
    std::cout << ablation_table_text(rows);
    std::cout << "wrote " << out_path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Financial sentiment regression toolkit"};
    app.require_subcommand(1);

    // preprocess
    auto* preprocess_cmd =
        app.add_subcommand("preprocess", "normalize and tokenize text (stdin or args)");
    TextprepOptions preprocess_opts;
    std::vector<std::string> preprocess_text;
    add_textprep_options(preprocess_cmd, preprocess_opts);
    preprocess_cmd->add_option("text", preprocess_text,
                               "text to preprocess (stdin when omitted)");

    // train-embeddings
    auto* embed_cmd =
        app.add_subcommand("train-embeddings", "learn word embeddings from a corpus");
    TextprepOptions embed_opts;
    std::string embed_corpus, embed_out;
    SkipgramConfig skipgram;
    add_textprep_options(embed_cmd, embed_opts);
    embed_cmd->add_option("--corpus", embed_corpus, "corpus file, one document per line")
        ->required();
    embed_cmd->add_option("--out", embed_out, "output embedding file")->required();
    embed_cmd->add_option("--dim", skipgram.dimensions, "vector dimensions");
    embed_cmd->add_option("--window", skipgram.window, "context window size");
    embed_cmd->add_option("--negatives", skipgram.negatives,
                          "negative samples per positive pair");
    embed_cmd->add_option("--min-count", skipgram.min_count,
                          "minimum token frequency");
    embed_cmd->add_option("--epochs", skipgram.epochs, "training epochs");
    embed_cmd->add_option("--seed", skipgram.seed, "random seed");
    embed_cmd->add_option("--lr", skipgram.initial_learning_rate,
                          "initial learning rate");
    embed_cmd->add_option("--threads", skipgram.threads,
                          "worker threads (1 = deterministic)");

    // analogy
    auto* analogy_cmd = app.add_subcommand("analogy", "a - b + c analogy query");
    std::string analogy_embeddings, analogy_a, analogy_b, analogy_c;
    size_t analogy_top = 5;
    analogy_cmd->add_option("--embeddings", analogy_embeddings, "embedding file")
        ->required();
    analogy_cmd->add_option("--top", analogy_top, "entries to print");
    analogy_cmd->add_option("a", analogy_a)->required();
    analogy_cmd->add_option("b", analogy_b)->required();
    analogy_cmd->add_option("c", analogy_c)->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "cross-validate and train a model");
    std::string train_config, train_data, train_out;
    std::vector<std::string> train_sets;
    train_cmd->add_option("--config", train_config, "experiment config file")->required();
    train_cmd->add_option("--train", train_data, "training dataset (JSON lines)")
        ->required();
    train_cmd->add_option("--out-model", train_out, "output pipeline model")->required();
    train_cmd->add_option("--set", train_sets, "config override key=value");

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "score instances with a model");
    std::string predict_model, predict_input, predict_out;
    predict_cmd->add_option("--model", predict_model, "pipeline model file")->required();
    predict_cmd->add_option("--input", predict_input, "dataset to score")->required();
    predict_cmd->add_option("--out", predict_out, "output predictions file")->required();

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "score predictions against gold");
    std::string eval_gold, eval_pred;
    eval_cmd->add_option("--gold", eval_gold, "gold dataset (JSON lines)")->required();
    eval_cmd->add_option("--pred", eval_pred, "predictions file")->required();

    // ablate
    auto* ablate_cmd =
        app.add_subcommand("ablate", "run the seven feature-block ablations");
    std::string ablate_config, ablate_train, ablate_test, ablate_out;
    std::vector<std::string> ablate_sets;
    ablate_cmd->add_option("--config", ablate_config, "experiment config file")
        ->required();
    ablate_cmd->add_option("--train", ablate_train, "training dataset")->required();
    ablate_cmd->add_option("--test", ablate_test, "test dataset")->required();
    ablate_cmd->add_option("--out", ablate_out, "output CSV file")->required();
    ablate_cmd->add_option("--set", ablate_sets, "config override key=value");

    CLI11_PARSE(app, argc, argv);

    try {
        if (preprocess_cmd->parsed())
            return cmd_preprocess(preprocess_opts, preprocess_text);
        if (embed_cmd->parsed())
            return cmd_train_embeddings(embed_opts, embed_corpus, embed_out, skipgram);
        if (analogy_cmd->parsed())
            return cmd_analogy(analogy_embeddings, analogy_a, analogy_b, analogy_c,
                               analogy_top);
        if (train_cmd->parsed())
            return cmd_train(train_config, train_data, train_out, train_sets);
        if (predict_cmd->parsed())
            return cmd_predict(predict_model, predict_input, predict_out);
        if (eval_cmd->parsed()) return cmd_evaluate(eval_gold, eval_pred);
        if (ablate_cmd->parsed())
            return cmd_ablate(ablate_config, ablate_train, ablate_test, ablate_out,
                              ablate_sets);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
