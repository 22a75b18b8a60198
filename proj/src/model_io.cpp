#include <fstream>
#include <string>
#include <vector>

#include "detail/model_serialize.hpp"
#include "detail/text_io.hpp"
#include "finsent/errors.hpp"
#include "finsent/regressors.hpp"

namespace finsent {

namespace {

using detail::hex_double;
using detail::LineReader;
using detail::parse_double;
using detail::parse_int;
using detail::parse_size;
using detail::read_values;
using detail::write_values;

constexpr int kFormatVersion = 1;

void save_forest(std::ostream& out, const RandomForestModel& model) {
    const RandomForestParams& p = model.params;
    out << "rf_params " << p.trees_count << ' ' << p.max_depth << ' '
        << p.min_samples_leaf << ' ' << p.features_per_split << ' '
        << (p.bootstrap ? 1 : 0) << ' ' << p.seed << '\n';
    out << "dims " << model.dims << '\n';
    out << "trees " << model.trees.size() << '\n';
    for (const RegressionTree& tree : model.trees) {
        out << "tree " << tree.nodes.size() << '\n';
        for (const TreeNode& node : tree.nodes)
            out << "node " << node.feature << ' ' << node.left << ' ' << node.right
                << ' ' << hex_double(node.threshold) << ' ' << hex_double(node.value)
                << '\n';
    }
}

RandomForestModel load_forest(LineReader& reader) {
    RandomForestModel model;
    std::vector<std::string> tokens = reader.expect("rf_params", 6);
    model.params.trees_count = static_cast<int>(parse_int(reader, tokens[1]));
    model.params.max_depth = static_cast<int>(parse_int(reader, tokens[2]));
    model.params.min_samples_leaf = static_cast<int>(parse_int(reader, tokens[3]));
    model.params.features_per_split = static_cast<int>(parse_int(reader, tokens[4]));
    model.params.bootstrap = parse_int(reader, tokens[5]) != 0;
    model.params.seed = static_cast<uint64_t>(parse_int(reader, tokens[6]));
    model.dims = parse_size(reader, reader.expect("dims", 1)[1]);
    const size_t tree_count = parse_size(reader, reader.expect("trees", 1)[1]);
    model.trees.resize(tree_count);
    for (RegressionTree& tree : model.trees) {
        const size_t node_count = parse_size(reader, reader.expect("tree", 1)[1]);
        tree.nodes.resize(node_count);
        for (TreeNode& node : tree.nodes) {
            tokens = reader.expect("node", 5);
            node.feature = static_cast<int32_t>(parse_int(reader, tokens[1]));
            node.left = static_cast<int32_t>(parse_int(reader, tokens[2]));
            node.right = static_cast<int32_t>(parse_int(reader, tokens[3]));
            node.threshold = parse_double(reader, tokens[4]);
            node.value = parse_double(reader, tokens[5]);
            const auto limit = static_cast<int32_t>(node_count);
            if (node.feature >= 0 &&
                (node.left < 0 || node.left >= limit || node.right < 0 ||
                 node.right >= limit))
                reader.fail("tree node points outside the node table");
        }
    }
    return model;
}

void save_svr(std::ostream& out, const SvrModel& model) {
    const SvrParams& p = model.params;
    out << "svr_params " << p.epochs << ' ' << p.seed << ' ' << hex_double(p.epsilon)
        << ' ' << hex_double(p.regularization_c) << ' ' << hex_double(p.learning_rate)
        << '\n';
    out << "dims " << model.weights.size() << '\n';
    out << "bias " << hex_double(model.bias) << '\n';
    write_values(out, "weights", model.weights);
}

SvrModel load_svr(LineReader& reader) {
    SvrModel model;
    std::vector<std::string> tokens = reader.expect("svr_params", 5);
    model.params.epochs = static_cast<int>(parse_int(reader, tokens[1]));
    model.params.seed = static_cast<uint64_t>(parse_int(reader, tokens[2]));
    model.params.epsilon = parse_double(reader, tokens[3]);
    model.params.regularization_c = parse_double(reader, tokens[4]);
    model.params.learning_rate = parse_double(reader, tokens[5]);
    const size_t dims = parse_size(reader, reader.expect("dims", 1)[1]);
    model.bias = parse_double(reader, reader.expect("bias", 1)[1]);
    model.weights = read_values(reader, "weights", dims);
    return model;
}

void save_mlp(std::ostream& out, const MlpModel& model) {
    const MlpParams& p = model.params;
    out << "mlp_params " << p.hidden_size << ' ' << p.epochs << ' ' << p.batch_size
        << ' ' << p.seed << ' ' << hex_double(p.learning_rate) << ' '
        << hex_double(p.momentum) << '\n';
    out << "dims " << model.dims() << '\n';
    for (size_t j = 0; j < model.hidden_size(); ++j)
        write_values(out, "hidden_row", model.hidden_weights.row(j));
    write_values(out, "hidden_bias", model.hidden_bias);
    write_values(out, "output_weights", model.output_weights);
    out << "output_bias " << hex_double(model.output_bias) << '\n';
}

MlpModel load_mlp(LineReader& reader) {
    MlpModel model;
    std::vector<std::string> tokens = reader.expect("mlp_params", 6);
    model.params.hidden_size = static_cast<int>(parse_int(reader, tokens[1]));
    model.params.epochs = static_cast<int>(parse_int(reader, tokens[2]));
    model.params.batch_size = static_cast<int>(parse_int(reader, tokens[3]));
    model.params.seed = static_cast<uint64_t>(parse_int(reader, tokens[4]));
    model.params.learning_rate = parse_double(reader, tokens[5]);
    model.params.momentum = parse_double(reader, tokens[6]);
    const size_t dims = parse_size(reader, reader.expect("dims", 1)[1]);
    if (model.params.hidden_size < 1) reader.fail("mlp hidden size must be positive");
    const size_t h = static_cast<size_t>(model.params.hidden_size);
    model.hidden_weights = Matrix(h, dims);
    for (size_t j = 0; j < h; ++j) {
        std::vector<double> row = read_values(reader, "hidden_row", dims);
        for (size_t k = 0; k < dims; ++k) model.hidden_weights.at(j, k) = row[k];
    }
    model.hidden_bias = read_values(reader, "hidden_bias", h);
    model.output_weights = read_values(reader, "output_weights", h);
    model.output_bias = parse_double(reader, reader.expect("output_bias", 1)[1]);
    return model;
}

}  // namespace

namespace detail {

void write_model_stream(std::ostream& out, const Model& model) {
    out << "finsent-model " << kFormatVersion << '\n';
    out << "kind " << regressor_name(model.kind) << '\n';
    out << "layout " << model.layout.enabled_blocks << ' ' << model.layout.bow_size
        << ' ' << model.layout.lexicon_size << ' ' << model.layout.embedding_size
        << '\n';
    if (const auto* rf = std::get_if<RandomForestModel>(&model.impl))
        save_forest(out, *rf);
    else if (const auto* svr = std::get_if<SvrModel>(&model.impl))
        save_svr(out, *svr);
    else
        save_mlp(out, std::get<MlpModel>(model.impl));
    out << "end\n";
}

Model read_model_stream(LineReader& reader) {
    std::vector<std::string> tokens = reader.expect("finsent-model", 1);
    const long long version = parse_int(reader, tokens[1]);
    if (version != kFormatVersion)
        reader.fail("unsupported model format version " + std::to_string(version) +
                    " (this build reads version " + std::to_string(kFormatVersion) +
                    ")");

    Model model;
    tokens = reader.expect("kind", 1);
    try {
        model.kind = regressor_from_name(tokens[1]);
    } catch (const ConfigError& e) {
        reader.fail(e.what());
    }

    tokens = reader.expect("layout", 4);
    model.layout.enabled_blocks =
        static_cast<FeatureBlocks>(parse_size(reader, tokens[1]));
    model.layout.bow_size = parse_size(reader, tokens[2]);
    model.layout.lexicon_size = parse_size(reader, tokens[3]);
    model.layout.embedding_size = parse_size(reader, tokens[4]);

    switch (model.kind) {
        case RegressorKind::RandomForest: model.impl = load_forest(reader); break;
        case RegressorKind::Svr: model.impl = load_svr(reader); break;
        case RegressorKind::Mlp: model.impl = load_mlp(reader); break;
    }
    reader.expect("end", 0);
    return model;
}

}  // namespace detail

void save_model(const Model& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    detail::write_model_stream(out, model);
    if (!out) throw IoError("failed while writing '" + path + "'");
}

Model load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model file '" + path + "'");
    detail::LineReader reader{in, path};
    return detail::read_model_stream(reader);
}

Model load_model(const std::string& path, RegressorKind expected_kind) {
    Model model = load_model(path);
    if (model.kind != expected_kind)
        throw FormatError(path + ": model kind is " + regressor_name(model.kind) +
                          ", expected " + regressor_name(expected_kind));
    return model;
}

}  // namespace finsent
