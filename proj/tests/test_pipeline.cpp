#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "finsent/errors.hpp"
#include "finsent/pipeline.hpp"
#include "test_util.hpp"

using namespace finsent;

namespace {

// Synthetic task whose gold score is a pure function of lexicon polarity:
// each text holds the company, two signal slots and a filler, and the score
// is 0.35 * (#positive - #negative). The embedding fixture deliberately maps
// opposite-sentiment words to the same vector, so the BoE block alone cannot
// solve the task while the Lex block can.
struct PipelineFixture {
    testutil::TempDir tmp;
    std::string lexicon_path;
    std::string embeddings_path;
    ExperimentConfig config;

    PipelineFixture() {
        lexicon_path = tmp.file("lex.tsv",
                                "surge\tLM_POSITIVE\n"
                                "rally\tLM_POSITIVE\n"
                                "slump\tLM_NEGATIVE\n"
                                "plunge\tLM_NEGATIVE\n");
        embeddings_path = tmp.file("emb.txt",
                                   "7 2\n"
                                   "surge 0.5 0.1\n"
                                   "slump 0.5 0.1\n"
                                   "rally 0.1 0.5\n"
                                   "plunge 0.1 0.5\n"
                                   "report 0.0 0.3\n"
                                   "update 0.0 0.3\n"
                                   "today 0.2 0.2\n");
        config.blocks = kBlockBow | kBlockLex;
        config.regressor = RegressorKind::RandomForest;
        config.grid["trees"] = {20};
        config.lexicon_paths = {lexicon_path};
        config.embeddings_path = embeddings_path;
        config.folds = 5;
        config.seed = 7;
    }

    static LabeledInstance instance(const std::string& id, int pos, int neg) {
        static const char* pos_words[] = {"surge", "rally"};
        static const char* neg_words[] = {"slump", "plunge"};
        static const char* filler[] = {"report", "update"};
        std::vector<std::string> slots;
        for (int i = 0; i < pos; ++i) slots.push_back(pos_words[i]);
        for (int i = 0; i < neg; ++i) slots.push_back(neg_words[i]);
        while (slots.size() < 2) slots.push_back(filler[slots.size() % 2]);

        LabeledInstance inst;
        inst.id = id;
        inst.company = "Acme";
        inst.text = "Acme " + slots[0] + " " + slots[1] + " today";
        inst.span = inst.text;
        inst.gold_score = 0.35 * (pos - neg);
        return inst;
    }

    // Cycles through the six (pos, neg) patterns.
    static std::vector<LabeledInstance> dataset(int n, const std::string& prefix) {
        static const std::pair<int, int> patterns[] = {
            {0, 0}, {1, 0}, {2, 0}, {0, 1}, {0, 2}, {1, 1}};
        std::vector<LabeledInstance> out;
        out.reserve(n);
        for (int i = 0; i < n; ++i) {
            const auto& [p, q] = patterns[i % 6];
            out.push_back(instance(prefix + std::to_string(i), p, q));
        }
        return out;
    }
};

}  // namespace

TEST_CASE("config files parse and overrides win") {
    testutil::TempDir tmp;
    std::string path = tmp.file("exp.cfg",
                                "# experiment configuration\n"
                                "genre = headline\n"
                                "features = bow, lex\n"
                                "regressor = svr\n"
                                "lexicons = lexA.tsv, lexB.tsv\n"
                                "stopwords = sw.txt   # inline comment\n"
                                "aliases = al.txt\n"
                                "stopword_removal = false\n"
                                "ngram_max = 2\n"
                                "\n"
                                "folds = 5\n"
                                "seed = 42\n"
                                "grid.c = 0.5, 1, 2\n"
                                "grid.epsilon = 0.05\n");
    auto config = load_experiment_config(path);
    CHECK(config.genre == Genre::Headline);
    CHECK(config.blocks == (kBlockBow | kBlockLex));
    CHECK(config.regressor == RegressorKind::Svr);
    REQUIRE(config.lexicon_paths.size() == 2);
    CHECK(config.lexicon_paths[0] == "lexA.tsv");
    CHECK(config.lexicon_paths[1] == "lexB.tsv");
    CHECK(config.stopwords_path == "sw.txt");
    CHECK(config.aliases_path == "al.txt");
    CHECK(!config.stopword_removal);
    CHECK(config.ngram_max == 2);
    CHECK(config.folds == 5);
    CHECK(config.seed == 42);
    CHECK(config.grid.at("c") == std::vector<double>{0.5, 1.0, 2.0});
    CHECK(config.grid.at("epsilon") == std::vector<double>{0.05});

    auto overridden = load_experiment_config(path, {"folds=7", "grid.c=1"});
    CHECK(overridden.folds == 7);
    CHECK(overridden.grid.at("c") == std::vector<double>{1.0});
    CHECK(overridden.seed == 42);  // untouched keys survive
}

TEST_CASE("config errors carry file and line") {
    testutil::TempDir tmp;
    CHECK_THROWS_WITH_AS(
        load_experiment_config(tmp.file("a.cfg", "folds = 5\nwat = 1\n")),
        doctest::Contains(":2:"), ConfigError);
    CHECK_THROWS_WITH_AS(
        load_experiment_config(tmp.file("b.cfg", "just some text\n")),
        doctest::Contains("key = value"), ConfigError);
    CHECK_THROWS_AS(load_experiment_config(tmp.file("c.cfg", "folds = soon\n")),
                    ConfigError);
    CHECK_THROWS_AS(load_experiment_config(tmp.file("d.cfg", "features = bogus\n")),
                    ConfigError);
    CHECK_THROWS_AS(load_experiment_config(tmp.file("e.cfg", "ngram_max = 2.5\n")),
                    ConfigError);
    CHECK_THROWS_AS(load_experiment_config((tmp.path() / "missing.cfg").string()),
                    IoError);

    ExperimentConfig config;
    CHECK_THROWS_AS(apply_config_overrides(config, {"no_equals_sign"}), ConfigError);
    CHECK_THROWS_AS(apply_config_overrides(config, {"seed=-3"}), ConfigError);
}

TEST_CASE("config validation") {
    ExperimentConfig config;
    config.blocks = kBlockBoe;
    CHECK_THROWS_WITH_AS(config.validate(), doctest::Contains("embeddings"),
                         ConfigError);
    config.blocks = kBlockLex;
    CHECK_THROWS_WITH_AS(config.validate(), doctest::Contains("lexicon"), ConfigError);
    config.blocks = 0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.blocks = kBlockBow;
    config.ngram_max = 4;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.ngram_max = 1;
    config.folds = 1;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.folds = 10;
    config.validate();  // bow-only needs no resources
}

TEST_CASE("grid expansion is a cartesian product in key order") {
    std::map<std::string, std::vector<double>> grid = {
        {"c", {1.0, 2.0}}, {"epsilon", {0.1, 0.2, 0.3}}};
    auto cells = expand_grid(RegressorKind::Svr, grid);
    REQUIRE(cells.size() == 6);
    // "c" sorts before "epsilon", so it is the slower axis.
    const double expect[][2] = {{1, 0.1}, {1, 0.2}, {1, 0.3},
                                {2, 0.1}, {2, 0.2}, {2, 0.3}};
    for (size_t i = 0; i < 6; ++i) {
        const auto& svr = std::get<SvrParams>(cells[i]);
        CHECK(svr.regularization_c == expect[i][0]);
        CHECK(svr.epsilon == expect[i][1]);
    }

    auto defaults = expand_grid(RegressorKind::Mlp, {});
    REQUIRE(defaults.size() == 1);
    CHECK(std::get<MlpParams>(defaults[0]).hidden_size == MlpParams{}.hidden_size);

    CHECK_THROWS_AS(expand_grid(RegressorKind::Svr, {{"trees", {10.0}}}), ConfigError);
    CHECK_THROWS_AS(expand_grid(RegressorKind::Svr, {{"c", {}}}), ConfigError);
}

TEST_CASE("preprocess_instance obfuscates the instance company and uses the span") {
    NormalizationConfig norm = NormalizationConfig::defaults();
    LabeledInstance inst;
    inst.id = "t1";
    inst.company = "Initech";
    inst.text = "completely different text";
    inst.span = "Initech shares surge";
    auto doc = preprocess_instance(inst, norm);
    CHECK(doc.source_id == "t1");
    CHECK(doc.tokens == std::vector<std::string>{"_company_", "shares", "surge"});

    // The global alias list still applies alongside the per-instance company.
    norm.company_aliases = {"Megacorp"};
    inst.span = "Megacorp sues Initech";
    doc = preprocess_instance(inst, norm);
    CHECK(doc.tokens == std::vector<std::string>{"_company_", "sues", "_company_"});

    // Without a company the global config is used as-is.
    inst.company.clear();
    doc = preprocess_instance(inst, norm);
    CHECK(doc.tokens == std::vector<std::string>{"_company_", "sues", "initech"});
}

TEST_CASE("lexicon-driven fixture is learned almost perfectly") {
    PipelineFixture fx;
    auto outcome = run_experiment(fx.config, PipelineFixture::dataset(48, "tr"),
                                  PipelineFixture::dataset(12, "te"));
    CHECK(outcome.report.cosine > 0.99);
    CHECK(outcome.report.mae < 0.05);
    CHECK(outcome.report.count == 12);
    REQUIRE(outcome.predictions.size() == 12);
    CHECK(outcome.predictions[0].first == "te0");
    REQUIRE(!outcome.cv.cells.empty());
    CHECK(outcome.cv.cells[outcome.cv.best_index].mean_cosine > 0.9);
}

TEST_CASE("constant gold scores are reproduced to numerical noise") {
    PipelineFixture fx;
    auto make_constant = [](int n, const std::string& prefix) {
        auto data = PipelineFixture::dataset(n, prefix);
        for (auto& inst : data) inst.gold_score = 0.25;
        return data;
    };
    auto outcome = run_experiment(fx.config, make_constant(20, "tr"),
                                  make_constant(8, "te"));
    CHECK(outcome.report.mae < 1e-9);
}

TEST_CASE("training fails cleanly on missing gold scores") {
    PipelineFixture fx;
    auto train = PipelineFixture::dataset(24, "tr");
    train[5].gold_score.reset();
    CHECK_THROWS_WITH_AS(run_training(fx.config, train), doctest::Contains("tr5"),
                         Error);

    auto test = PipelineFixture::dataset(6, "te");
    test[2].gold_score.reset();
    CHECK_THROWS_WITH_AS(
        run_experiment(fx.config, PipelineFixture::dataset(24, "tr"), test),
        doctest::Contains("use predict"), Error);
}

TEST_CASE("stage failures name the stage; config errors pass through") {
    PipelineFixture fx;
    auto config = fx.config;
    config.lexicon_paths = {"/nonexistent/lex.tsv"};
    CHECK_THROWS_WITH_AS(run_training(config, PipelineFixture::dataset(12, "x")),
                         doctest::Contains("loading lexicons"), Error);

    config = fx.config;
    config.blocks = kBlockBoe;
    config.embeddings_path.clear();
    CHECK_THROWS_AS(run_training(config, PipelineFixture::dataset(12, "x")),
                    ConfigError);
}

TEST_CASE("cross-validation never sees the test split") {
    PipelineFixture fx;
    auto train = PipelineFixture::dataset(30, "tr");
    auto test_a = PipelineFixture::dataset(10, "ta");
    auto test_b = PipelineFixture::dataset(16, "tb");
    // Make the two test sets genuinely different in content, not just size.
    for (auto& inst : test_b) inst.gold_score = 0.0;

    auto a = run_experiment(fx.config, train, test_a);
    auto b = run_experiment(fx.config, train, test_b);
    CHECK(a.cv.best_index == b.cv.best_index);
    REQUIRE(a.cv.cells.size() == b.cv.cells.size());
    for (size_t c = 0; c < a.cv.cells.size(); ++c) {
        REQUIRE(a.cv.cells[c].folds.size() == b.cv.cells[c].folds.size());
        for (size_t f = 0; f < a.cv.cells[c].folds.size(); ++f) {
            CHECK(a.cv.cells[c].folds[f].cosine == b.cv.cells[c].folds[f].cosine);
            CHECK(a.cv.cells[c].folds[f].mae == b.cv.cells[c].folds[f].mae);
        }
    }
}

TEST_CASE("file-level runs write byte-identical predictions") {
    PipelineFixture fx;
    auto write_jsonl = [&](const std::string& name,
                           const std::vector<LabeledInstance>& data) {
        std::string body;
        for (const auto& inst : data) {
            body += "{\"id\": \"" + inst.id + "\", \"text\": \"" + inst.text +
                    "\", \"company\": \"" + inst.company + "\", \"score\": " +
                    std::to_string(*inst.gold_score) + "}\n";
        }
        return fx.tmp.file(name, body);
    };
    std::string train_path = write_jsonl("train.jsonl", PipelineFixture::dataset(30, "tr"));
    std::string test_path = write_jsonl("test.jsonl", PipelineFixture::dataset(10, "te"));

    std::string out1 = (fx.tmp.path() / "pred1.jsonl").string();
    std::string out2 = (fx.tmp.path() / "pred2.jsonl").string();
    auto r1 = run_experiment_files(fx.config, train_path, test_path, out1);
    auto r2 = run_experiment_files(fx.config, train_path, test_path, out2);
    CHECK(r1.report.cosine == r2.report.cosine);
    const std::string bytes1 = testutil::read_file(out1);
    CHECK(!bytes1.empty());
    CHECK(bytes1 == testutil::read_file(out2));

    auto loaded = load_predictions(out1);
    REQUIRE(loaded.size() == 10);
    CHECK(loaded[3].first == "te3");
}

TEST_CASE("ablation produces the seven fixed rows deterministically") {
    PipelineFixture fx;
    auto config = fx.config;
    config.blocks = kBlockBow | kBlockLex | kBlockBoe;
    auto train = PipelineFixture::dataset(48, "tr");
    auto test = PipelineFixture::dataset(12, "te");

    auto rows = run_ablation(config, train, test);
    REQUIRE(rows.size() == 7);
    const std::vector<std::string> labels = {"Lex",     "BoE",     "BoW", "BoE+Lex",
                                             "BoW+Lex", "BoW+BoE", "All"};
    for (size_t i = 0; i < 7; ++i) {
        CHECK(rows[i].label == labels[i]);
        CHECK(rows[i].report.count == 12);
    }
    CHECK(rows[0].blocks == kBlockLex);
    CHECK(rows[6].blocks == (kBlockBow | kBlockLex | kBlockBoe));

    // The lexicon solves this task; the collapsed embeddings cannot.
    CHECK(rows[0].report.cosine > rows[1].report.cosine);
    CHECK(rows[0].report.mae < rows[1].report.mae);

    // Identical runs serialize to identical bytes.
    std::string csv1 = (fx.tmp.path() / "ab1.csv").string();
    std::string csv2 = (fx.tmp.path() / "ab2.csv").string();
    write_ablation_csv(rows, csv1);
    write_ablation_csv(run_ablation(config, train, test), csv2);
    const std::string bytes = testutil::read_file(csv1);
    CHECK(bytes == testutil::read_file(csv2));
    CHECK(bytes.rfind("features,cosine,mae\n", 0) == 0);
    CHECK(std::count(bytes.begin(), bytes.end(), '\n') == 8);

    auto table = ablation_table_text(rows);
    for (const auto& label : labels) CHECK(table.find(label) != std::string::npos);

    // Missing resources for any block stop the whole ablation up front.
    auto broken = config;
    broken.embeddings_path.clear();
    CHECK_THROWS_AS(run_ablation(broken, train, test), ConfigError);
}

TEST_CASE("experiments round-trip through their model file") {
    PipelineFixture fx;
    auto config = fx.config;
    config.blocks = kBlockBow | kBlockLex | kBlockBoe;
    auto train = PipelineFixture::dataset(36, "tr");
    auto test = PipelineFixture::dataset(10, "te");

    auto experiment = run_training(config, train);
    std::string path = (fx.tmp.path() / "exp.model").string();
    save_experiment(experiment, path);
    auto loaded = load_experiment(path);

    CHECK(loaded.config.genre == config.genre);
    CHECK(loaded.config.ngram_max == config.ngram_max);
    CHECK(loaded.layout == experiment.layout);
    CHECK(loaded.cv.cells.empty());  // cv is not persisted
    REQUIRE(loaded.bow_vocab.size() == experiment.bow_vocab.size());
    for (size_t i = 0; i < loaded.bow_vocab.size(); ++i)
        CHECK(loaded.bow_vocab.token_at(i) == experiment.bow_vocab.token_at(i));
    REQUIRE(loaded.embeddings.has_value());
    CHECK(loaded.embeddings->input_vectors == experiment.embeddings->input_vectors);

    auto original = predict_scores(experiment, test);
    auto reloaded = predict_scores(loaded, test);
    REQUIRE(original.size() == reloaded.size());
    for (size_t i = 0; i < original.size(); ++i) CHECK(original[i] == reloaded[i]);

    // Serialization itself is deterministic.
    std::string path2 = (fx.tmp.path() / "exp2.model").string();
    save_experiment(experiment, path2);
    CHECK(testutil::read_file(path) == testutil::read_file(path2));

    // Tampered files are rejected.
    std::string good = testutil::read_file(path);
    CHECK_THROWS_AS(load_experiment(fx.tmp.file("trunc.model",
                                                good.substr(0, good.size() / 3))),
                    FormatError);
    CHECK_THROWS_AS(load_experiment(fx.tmp.file("junk.model", "who knows\n")),
                    FormatError);
    CHECK_THROWS_AS(load_experiment((fx.tmp.path() / "absent.model").string()),
                    IoError);
}
