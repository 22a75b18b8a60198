#include "finsent/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "detail/model_serialize.hpp"
#include "detail/text_io.hpp"
#include "finsent/errors.hpp"

namespace finsent {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string piece;
    std::istringstream in(s);
    while (std::getline(in, piece, sep)) {
        piece = trim(piece);
        if (!piece.empty()) parts.push_back(piece);
    }
    return parts;
}

double parse_config_number(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw ConfigError("config key '" + key + "': '" + value +
                          "' is not a number");
    return v;
}

long long parse_config_int(const std::string& key, const std::string& value) {
    const double v = parse_config_number(key, value);
    if (v != std::floor(v))
        throw ConfigError("config key '" + key + "' must be an integer");
    return static_cast<long long>(v);
}

bool parse_config_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "yes" || value == "on")
        return true;
    if (value == "0" || value == "false" || value == "no" || value == "off")
        return false;
    throw ConfigError("config key '" + key + "': '" + value +
                      "' is not a boolean");
}

FeatureBlocks parse_blocks(const std::string& value) {
    FeatureBlocks blocks = 0;
    for (const std::string& part : split_list(value, ',')) {
        if (part == "bow") blocks |= kBlockBow;
        else if (part == "lex") blocks |= kBlockLex;
        else if (part == "boe") blocks |= kBlockBoe;
        else if (part == "all") blocks |= kBlockBow | kBlockLex | kBlockBoe;
        else
            throw ConfigError("unknown feature block '" + part +
                              "' (expected bow, lex, boe or all)");
    }
    if (blocks == 0) throw ConfigError("feature block list is empty");
    return blocks;
}

void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value) {
    if (key == "genre") {
        try {
            config.genre = genre_from_name(value);
        } catch (const Error& e) {
            throw ConfigError(std::string("config key 'genre': ") + e.what());
        }
    } else if (key == "features") {
        config.blocks = parse_blocks(value);
    } else if (key == "regressor") {
        config.regressor = regressor_from_name(value);
    } else if (key == "embeddings") {
        config.embeddings_path = value;
    } else if (key == "lexicons" || key == "lexicon") {
        config.lexicon_paths = split_list(value, ',');
    } else if (key == "stopwords") {
        config.stopwords_path = value;
    } else if (key == "aliases") {
        config.aliases_path = value;
    } else if (key == "stopword_removal") {
        config.stopword_removal = parse_config_bool(key, value);
    } else if (key == "ngram_max") {
        config.ngram_max = static_cast<int>(parse_config_int(key, value));
    } else if (key == "folds") {
        config.folds = static_cast<int>(parse_config_int(key, value));
    } else if (key == "seed") {
        const long long v = parse_config_int(key, value);
        if (v < 0) throw ConfigError("config key 'seed' must not be negative");
        config.seed = static_cast<uint64_t>(v);
    } else if (key.rfind("grid.", 0) == 0) {
        const std::string param = key.substr(5);
        if (param.empty()) throw ConfigError("grid key with no parameter name");
        std::vector<double> values;
        for (const std::string& part : split_list(value, ','))
            values.push_back(parse_config_number(key, part));
        if (values.empty())
            throw ConfigError("config key '" + key + "' has no values");
        config.grid[param] = values;
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

// Stages keep their failure context; ConfigError passes through untouched
// so callers can still distinguish configuration mistakes.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw Error(std::string(name) + ": " + e.what());
    }
}

constexpr std::array<std::pair<const char*, FeatureBlocks>, 7> kAblationRows = {{
    {"Lex", kBlockLex},
    {"BoE", kBlockBoe},
    {"BoW", kBlockBow},
    {"BoE+Lex", kBlockBoe | kBlockLex},
    {"BoW+Lex", kBlockBow | kBlockLex},
    {"BoW+BoE", kBlockBow | kBlockBoe},
    {"All", kBlockBow | kBlockLex | kBlockBoe},
}};

}  // namespace

void ExperimentConfig::validate() const {
    if (blocks == 0) throw ConfigError("no feature block is enabled");
    if ((blocks & kBlockBoe) && embeddings_path.empty())
        throw ConfigError(
            "the boe feature block needs an embeddings file (set 'embeddings')");
    if ((blocks & kBlockLex) && lexicon_paths.empty())
        throw ConfigError(
            "the lex feature block needs at least one lexicon (set 'lexicons')");
    if (ngram_max < 1 || ngram_max > 3)
        throw ConfigError("ngram_max must be 1, 2 or 3");
    if (folds < 2) throw ConfigError("folds must be at least 2");
}

ExperimentConfig load_experiment_config(const std::string& path,
                                        const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    ExperimentConfig config;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) +
                              ": expected 'key = value', found '" + line + "'");
        try {
            apply_config_entry(config, trim(line.substr(0, eq)),
                               trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    apply_config_overrides(config, overrides);
    return config;
}

void apply_config_overrides(ExperimentConfig& config,
                            const std::vector<std::string>& overrides) {
    for (const std::string& entry : overrides) {
        const size_t eq = entry.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + entry + "' is not of the form key=value");
        apply_config_entry(config, trim(entry.substr(0, eq)),
                           trim(entry.substr(eq + 1)));
    }
}

std::vector<RegressorParams> expand_grid(
    RegressorKind kind, const std::map<std::string, std::vector<double>>& grid) {
    std::vector<std::map<std::string, double>> assignments{{}};
    for (const auto& [key, values] : grid) {
        if (values.empty()) throw ConfigError("grid axis '" + key + "' is empty");
        std::vector<std::map<std::string, double>> next;
        next.reserve(assignments.size() * values.size());
        for (const auto& base : assignments) {
            for (double v : values) {
                auto extended = base;
                extended[key] = v;
                next.push_back(std::move(extended));
            }
        }
        assignments = std::move(next);
    }
    std::vector<RegressorParams> out;
    out.reserve(assignments.size());
    for (const auto& assignment : assignments)
        out.push_back(params_from_map(kind, assignment));
    return out;
}

TokenizedDocument preprocess_instance(const LabeledInstance& instance,
                                      const NormalizationConfig& config) {
    if (instance.company.empty())
        return preprocess(instance.span, config, instance.id);
    NormalizationConfig with_company = config;
    with_company.company_aliases.push_back(instance.company);
    return preprocess(instance.span, with_company, instance.id);
}

TrainedExperiment run_training(const ExperimentConfig& config,
                               const std::vector<LabeledInstance>& train) {
    config.validate();
    if (train.empty()) throw Error("training set is empty");

    TrainedExperiment exp;
    exp.config = config;
    exp.normalization = stage("loading normalization resources", [&] {
        NormalizationConfig norm = NormalizationConfig::defaults();
        norm.apply_stopword_removal = config.stopword_removal;
        if (!config.stopwords_path.empty())
            norm.stopwords = load_stopwords(config.stopwords_path);
        if (!config.aliases_path.empty())
            norm.company_aliases = load_company_aliases(config.aliases_path);
        return norm;
    });
    if (config.blocks & kBlockLex) {
        exp.lexicon = stage("loading lexicons", [&] {
            std::vector<Lexicon> parts;
            parts.reserve(config.lexicon_paths.size());
            for (const std::string& path : config.lexicon_paths)
                parts.push_back(load_normalized(path));
            return merge(parts);
        });
    }
    if (config.blocks & kBlockBoe) {
        exp.embeddings = stage("loading embeddings", [&] {
            return load_embeddings(config.embeddings_path);
        });
    }

    std::vector<TokenizedDocument> docs = stage("preprocessing training data", [&] {
        std::vector<TokenizedDocument> out;
        out.reserve(train.size());
        for (const LabeledInstance& inst : train)
            out.push_back(preprocess_instance(inst, exp.normalization));
        return out;
    });

    if (config.blocks & kBlockBow)
        exp.bow_vocab = fit_bow_vocabulary(docs, config.ngram_max);
    exp.layout = FeatureLayout::make(
        config.blocks, exp.bow_vocab.size(),
        exp.embeddings ? exp.embeddings->dimensions() : 0);

    TrainingSet set = stage("featurizing training data", [&] {
        TrainingSet out;
        out.features.reserve(train.size());
        out.targets.reserve(train.size());
        for (size_t i = 0; i < train.size(); ++i) {
            if (!train[i].gold_score)
                throw Error("training instance '" + train[i].id +
                            "' has no gold score");
            out.features.push_back(assemble(
                docs[i], exp.layout,
                config.blocks & kBlockBow ? &exp.bow_vocab : nullptr,
                config.blocks & kBlockLex ? &exp.lexicon : nullptr,
                exp.embeddings ? &*exp.embeddings : nullptr, config.ngram_max));
            out.targets.push_back(*train[i].gold_score);
        }
        return out;
    });

    const DenseDataset dense = set.to_dense();
    const std::vector<RegressorParams> grid = expand_grid(config.regressor, config.grid);
    exp.cv = stage("cross-validation", [&] {
        return cross_validate(dense, grid, config.folds, config.seed);
    });
    exp.model = stage("final training", [&] {
        return train_model(set, exp.cv.best_params());
    });
    return exp;
}

std::vector<double> predict_scores(const TrainedExperiment& experiment,
                                   const std::vector<LabeledInstance>& instances) {
    const ExperimentConfig& config = experiment.config;
    std::vector<double> scores;
    scores.reserve(instances.size());
    for (const LabeledInstance& inst : instances) {
        TokenizedDocument doc = preprocess_instance(inst, experiment.normalization);
        FeatureVector features = assemble(
            doc, experiment.layout,
            experiment.layout.has(kBlockBow) ? &experiment.bow_vocab : nullptr,
            experiment.layout.has(kBlockLex) ? &experiment.lexicon : nullptr,
            experiment.embeddings ? &*experiment.embeddings : nullptr,
            config.ngram_max);
        scores.push_back(experiment.model.predict(features));
    }
    return scores;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config,
                                 const std::vector<LabeledInstance>& train,
                                 const std::vector<LabeledInstance>& test) {
    TrainedExperiment exp = run_training(config, train);

    std::vector<double> gold;
    gold.reserve(test.size());
    for (const LabeledInstance& inst : test) {
        if (!inst.gold_score)
            throw Error("test instance '" + inst.id +
                        "' has no gold score; use predict for unscored data");
        gold.push_back(*inst.gold_score);
    }
    const std::vector<double> pred =
        stage("prediction", [&] { return predict_scores(exp, test); });

    ExperimentOutcome outcome;
    outcome.cv = std::move(exp.cv);
    outcome.report = evaluate_predictions(gold, pred);
    outcome.predictions.reserve(test.size());
    for (size_t i = 0; i < test.size(); ++i)
        outcome.predictions.emplace_back(test[i].id, pred[i]);
    return outcome;
}

ExperimentOutcome run_experiment_files(const ExperimentConfig& config,
                                       const std::string& train_path,
                                       const std::string& test_path,
                                       const std::string& predictions_out) {
    config.validate();
    const std::vector<LabeledInstance> train = stage("loading training data", [&] {
        return load_dataset(train_path, config.genre);
    });
    const std::vector<LabeledInstance> test = stage("loading test data", [&] {
        return load_dataset(test_path, config.genre);
    });
    ExperimentOutcome outcome = run_experiment(config, train, test);
    if (!predictions_out.empty())
        save_predictions(outcome.predictions, predictions_out);
    return outcome;
}

std::vector<AblationRow> run_ablation(const ExperimentConfig& config,
                                      const std::vector<LabeledInstance>& train,
                                      const std::vector<LabeledInstance>& test) {
    // Every row must be runnable, so the resources for all three blocks are
    // checked up front.
    ExperimentConfig full = config;
    full.blocks = kBlockBow | kBlockLex | kBlockBoe;
    full.validate();

    std::vector<AblationRow> rows;
    rows.reserve(kAblationRows.size());
    for (const auto& [label, blocks] : kAblationRows) {
        ExperimentConfig cell = config;
        cell.blocks = blocks;
        AblationRow row;
        row.label = label;
        row.blocks = blocks;
        row.report = run_experiment(cell, train, test).report;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string ablation_table_text(const std::vector<AblationRow>& rows) {
    size_t width = std::string("features").size();
    for (const AblationRow& row : rows) width = std::max(width, row.label.size());

    std::ostringstream out;
    out << "features" << std::string(width - 8, ' ') << "  cosine     mae\n";
    char buf[64];
    for (const AblationRow& row : rows) {
        out << row.label << std::string(width - row.label.size(), ' ');
        std::snprintf(buf, sizeof buf, "  %9.6f  %8.6f", row.report.cosine,
                      row.report.mae);
        out << buf << '\n';
    }
    return out.str();
}

void write_ablation_csv(const std::vector<AblationRow>& rows,
                        const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "features,cosine,mae\n";
    char buf[64];
    for (const AblationRow& row : rows) {
        std::snprintf(buf, sizeof buf, ",%.6f,%.6f", row.report.cosine,
                      row.report.mae);
        out << row.label << buf << '\n';
    }
    if (!out) throw IoError("failed while writing '" + path + "'");
}

// ---- pipeline-model container ----

namespace {

constexpr int kPipelineFormatVersion = 1;

std::string class_set_text(WordClassSet classes) {
    std::string out;
    for (size_t c = 0; c < kWordClassCount; ++c) {
        const auto wc = static_cast<WordClass>(c);
        if (!classes.contains(wc)) continue;
        if (!out.empty()) out += ',';
        out += word_class_name(wc);
    }
    return out;
}

}  // namespace

void save_experiment(const TrainedExperiment& experiment, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    const ExperimentConfig& config = experiment.config;

    out << "finsent-pipeline " << kPipelineFormatVersion << '\n';
    out << "genre " << genre_name(config.genre) << '\n';
    out << "blocks " << experiment.layout.enabled_blocks << '\n';
    out << "regressor " << regressor_name(config.regressor) << '\n';
    out << "ngram_max " << config.ngram_max << '\n';
    out << "stopword_removal " << (experiment.normalization.apply_stopword_removal ? 1 : 0)
        << '\n';
    out << "seed " << config.seed << '\n';
    out << "folds " << config.folds << '\n';

    // Stopwords and aliases in sorted order so identical experiments always
    // serialize to identical bytes.
    std::vector<std::string> stopwords(experiment.normalization.stopwords.begin(),
                                       experiment.normalization.stopwords.end());
    std::sort(stopwords.begin(), stopwords.end());
    out << "stopwords " << stopwords.size() << '\n';
    for (const std::string& word : stopwords) out << "sw " << word << '\n';

    std::vector<std::string> aliases = experiment.normalization.company_aliases;
    std::sort(aliases.begin(), aliases.end());
    out << "aliases " << aliases.size() << '\n';
    for (const std::string& alias : aliases) out << "alias " << alias << '\n';

    std::vector<std::pair<std::string, WordClassSet>> entries(
        experiment.lexicon.entries.begin(), experiment.lexicon.entries.end());
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out << "lexicon " << entries.size() << '\n';
    for (const auto& [word, classes] : entries)
        out << "lexword " << word << ' ' << class_set_text(classes) << '\n';

    out << "bow_vocab " << experiment.bow_vocab.size() << '\n';
    for (size_t i = 0; i < experiment.bow_vocab.size(); ++i)
        out << "bowtok " << experiment.bow_vocab.token_at(i) << ' '
            << experiment.bow_vocab.frequency_at(i) << '\n';

    if (experiment.embeddings) {
        const EmbeddingMatrix& emb = *experiment.embeddings;
        out << "embeddings 1\n";
        out << "emb_size " << emb.vocabulary.size() << ' ' << emb.dimensions() << '\n';
        for (size_t i = 0; i < emb.vocabulary.size(); ++i) {
            out << "emb " << emb.vocabulary.token_at(i);
            for (double v : emb.input_vectors.row(i))
                out << ' ' << detail::hex_double(v);
            out << '\n';
        }
    } else {
        out << "embeddings 0\n";
    }

    detail::write_model_stream(out, experiment.model);
    out << "end_pipeline\n";
    if (!out) throw IoError("failed while writing '" + path + "'");
}

TrainedExperiment load_experiment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open pipeline model '" + path + "'");
    detail::LineReader reader{in, path};

    std::vector<std::string> tokens = reader.expect("finsent-pipeline", 1);
    const long long version = detail::parse_int(reader, tokens[1]);
    if (version != kPipelineFormatVersion)
        reader.fail("unsupported pipeline format version " + std::to_string(version));

    TrainedExperiment exp;
    exp.normalization = NormalizationConfig::defaults();

    exp.config.genre = genre_from_name(reader.expect("genre", 1)[1]);
    exp.config.blocks = static_cast<FeatureBlocks>(
        detail::parse_size(reader, reader.expect("blocks", 1)[1]));
    exp.config.regressor = regressor_from_name(reader.expect("regressor", 1)[1]);
    exp.config.ngram_max = static_cast<int>(
        detail::parse_int(reader, reader.expect("ngram_max", 1)[1]));
    exp.config.stopword_removal =
        detail::parse_int(reader, reader.expect("stopword_removal", 1)[1]) != 0;
    exp.normalization.apply_stopword_removal = exp.config.stopword_removal;
    exp.config.seed = static_cast<uint64_t>(
        detail::parse_int(reader, reader.expect("seed", 1)[1]));
    exp.config.folds = static_cast<int>(
        detail::parse_int(reader, reader.expect("folds", 1)[1]));

    const size_t stopword_count =
        detail::parse_size(reader, reader.expect("stopwords", 1)[1]);
    for (size_t i = 0; i < stopword_count; ++i)
        exp.normalization.stopwords.insert(reader.expect("sw", 1)[1]);

    const size_t alias_count =
        detail::parse_size(reader, reader.expect("aliases", 1)[1]);
    for (size_t i = 0; i < alias_count; ++i) {
        if (!reader.next(tokens) || tokens[0] != "alias")
            reader.fail("expected an 'alias' line");
        std::string alias;
        for (size_t t = 1; t < tokens.size(); ++t) {
            if (t > 1) alias += ' ';
            alias += tokens[t];
        }
        if (alias.empty()) reader.fail("empty alias entry");
        exp.normalization.company_aliases.push_back(alias);
    }

    const size_t lexicon_count =
        detail::parse_size(reader, reader.expect("lexicon", 1)[1]);
    exp.lexicon.source_name = "pipeline";
    for (size_t i = 0; i < lexicon_count; ++i) {
        tokens = reader.expect("lexword", 2);
        WordClassSet classes;
        for (const std::string& name : split_list(tokens[2], ',')) {
            try {
                classes.insert(word_class_from_name(name));
            } catch (const Error& e) {
                reader.fail(e.what());
            }
        }
        if (classes.empty()) reader.fail("lexicon entry with no classes");
        exp.lexicon.entries[tokens[1]].merge(classes);
    }

    const size_t bow_count =
        detail::parse_size(reader, reader.expect("bow_vocab", 1)[1]);
    {
        std::unordered_map<std::string, int64_t> counts;
        counts.reserve(bow_count);
        for (size_t i = 0; i < bow_count; ++i) {
            tokens = reader.expect("bowtok", 2);
            counts[tokens[1]] = detail::parse_int(reader, tokens[2]);
        }
        if (counts.size() != bow_count) reader.fail("duplicate bow vocabulary token");
        exp.bow_vocab = Vocabulary::from_counts(counts, 1);
    }

    const long long has_embeddings =
        detail::parse_int(reader, reader.expect("embeddings", 1)[1]);
    if (has_embeddings != 0) {
        tokens = reader.expect("emb_size", 2);
        const size_t v = detail::parse_size(reader, tokens[1]);
        const size_t d = detail::parse_size(reader, tokens[2]);
        EmbeddingMatrix emb;
        emb.input_vectors = Matrix(v, d);
        emb.output_vectors = Matrix(v, d);
        std::vector<std::string> words;
        words.reserve(v);
        for (size_t i = 0; i < v; ++i) {
            tokens = reader.expect("emb", d + 1);
            words.push_back(tokens[1]);
            for (size_t k = 0; k < d; ++k)
                emb.input_vectors.at(i, k) = detail::parse_double(reader, tokens[k + 2]);
        }
        emb.vocabulary = Vocabulary::from_ordered_tokens(words);
        if (emb.vocabulary.size() != v) reader.fail("duplicate embedding token");
        exp.embeddings = std::move(emb);
    }

    exp.model = detail::read_model_stream(reader);
    exp.layout = exp.model.layout;
    reader.expect("end_pipeline", 0);
    return exp;
}

}  // namespace finsent
