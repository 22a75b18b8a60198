#include "finsent/features.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "finsent/errors.hpp"

namespace finsent {

namespace {

std::vector<std::string> ngrams_of(const TokenizedDocument& doc, int ngram_max) {
    std::vector<std::string> grams;
    const auto& toks = doc.tokens;
    for (size_t i = 0; i < toks.size(); ++i) {
        std::string gram;
        for (int n = 0; n < ngram_max && i + n < toks.size(); ++n) {
            if (n) gram += '_';
            gram += toks[i + n];
            grams.push_back(gram);
        }
    }
    return grams;
}

}  // namespace

FeatureLayout FeatureLayout::make(FeatureBlocks blocks, size_t bow_vocab_size,
                                  size_t embedding_dims) {
    FeatureLayout layout;
    layout.enabled_blocks = blocks;
    layout.bow_size = (blocks & kBlockBow) ? bow_vocab_size : 0;
    layout.lexicon_size = (blocks & kBlockLex) ? kLexiconFeatureCount : 0;
    layout.embedding_size = (blocks & kBlockBoe) ? embedding_dims : 0;
    return layout;
}

std::vector<double> FeatureVector::to_dense() const {
    std::vector<double> dense(layout.total_dimension(), 0.0);
    for (const auto& [idx, value] : bow) dense[layout.bow_offset() + idx] = value;
    if (layout.has(kBlockLex))
        std::copy(lex.begin(), lex.end(), dense.begin() + layout.lex_offset());
    if (layout.has(kBlockBoe))
        std::copy(boe.begin(), boe.end(), dense.begin() + layout.boe_offset());
    return dense;
}

Vocabulary fit_bow_vocabulary(const std::vector<TokenizedDocument>& train_docs,
                              int ngram_max) {
    std::unordered_map<std::string, int64_t> counts;
    for (const auto& doc : train_docs)
        for (auto& gram : ngrams_of(doc, ngram_max)) ++counts[gram];
    return Vocabulary::from_counts(counts, 1);
}

std::vector<std::pair<uint32_t, double>> bow_vector(const TokenizedDocument& doc,
                                                    const Vocabulary& vocab,
                                                    int ngram_max) {
    std::map<uint32_t, double> counts;
    for (const auto& gram : ngrams_of(doc, ngram_max)) {
        int64_t idx = vocab.index_of(gram);
        if (idx >= 0) counts[static_cast<uint32_t>(idx)] += 1.0;
    }
    return {counts.begin(), counts.end()};
}

std::array<double, kLexiconFeatureCount> lexicon_features(
    const TokenizedDocument& doc, const Lexicon& lex) {
    std::array<int64_t, kWordClassCount> class_counts{};
    for (const auto& token : doc.tokens) {
        WordClassSet classes = lex.classes_of(token);
        for (size_t c = 0; c < kWordClassCount; ++c)
            if (classes.contains(static_cast<WordClass>(c))) ++class_counts[c];
    }
    const double span_len =
        static_cast<double>(std::max<size_t>(1, doc.tokens.size()));
    auto count = [&](WordClass c) {
        return static_cast<double>(class_counts[static_cast<size_t>(c)]);
    };

    std::array<double, kLexiconFeatureCount> f{};
    f[0] = count(WordClass::LmPositive) > 0 ? 1.0 : 0.0;
    f[1] = count(WordClass::LmNegative) > 0 ? 1.0 : 0.0;
    f[2] = count(WordClass::LmConstraining) > 0 ? 1.0 : 0.0;
    f[3] = count(WordClass::LmLitigious) > 0 ? 1.0 : 0.0;
    f[4] = count(WordClass::LmUncertain) > 0 ? 1.0 : 0.0;
    f[5] = count(WordClass::LmModal) > 0 ? 1.0 : 0.0;
    f[6] = (count(WordClass::LmPositive) - count(WordClass::LmNegative)) / span_len;
    f[7] = count(WordClass::MpqaPositive) > 0 ? 1.0 : 0.0;
    f[8] = count(WordClass::MpqaNegative) > 0 ? 1.0 : 0.0;
    f[9] = count(WordClass::MpqaNeutral) > 0 ? 1.0 : 0.0;
    f[10] =
        (count(WordClass::MpqaPositive) - count(WordClass::MpqaNegative)) / span_len;
    return f;
}

std::vector<double> bag_of_embeddings(const TokenizedDocument& doc,
                                      const EmbeddingMatrix& matrix) {
    const size_t dim = matrix.dimensions();
    std::vector<double> mean(dim, 0.0);
    size_t in_vocab = 0;
    for (const auto& token : doc.tokens) {
        int64_t idx = matrix.vocabulary.index_of(token);
        if (idx < 0) continue;
        auto row = matrix.input_vectors.row(static_cast<size_t>(idx));
        for (size_t d = 0; d < dim; ++d) mean[d] += row[d];
        ++in_vocab;
    }
    if (in_vocab > 0)
        for (auto& v : mean) v /= static_cast<double>(in_vocab);
    return mean;
}

FeatureVector assemble(const TokenizedDocument& doc, const FeatureLayout& layout,
                       const Vocabulary* bow_vocab, const Lexicon* lex,
                       const EmbeddingMatrix* matrix, int ngram_max) {
    if (layout.enabled_blocks == 0)
        throw ConfigError("assemble: no feature blocks enabled");

    FeatureVector fv;
    fv.layout = layout;
    if (layout.has(kBlockBow)) {
        if (!bow_vocab)
            throw ConfigError("assemble: BoW block enabled but no vocabulary given");
        fv.bow = bow_vector(doc, *bow_vocab, ngram_max);
    }
    if (layout.has(kBlockLex)) {
        if (!lex)
            throw ConfigError("assemble: lexicon block enabled but no lexicon given");
        fv.lex = lexicon_features(doc, *lex);
    }
    if (layout.has(kBlockBoe)) {
        if (!matrix)
            throw ConfigError(
                "assemble: embedding block enabled but no embedding matrix given");
        if (matrix->dimensions() != layout.embedding_size)
            throw ConfigError("assemble: embedding matrix has " +
                              std::to_string(matrix->dimensions()) +
                              " dimensions, layout expects " +
                              std::to_string(layout.embedding_size));
        fv.boe = bag_of_embeddings(doc, *matrix);
    }
    return fv;
}

void dump_feature_matrix(const std::vector<FeatureVector>& rows,
                         const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write feature matrix to " + path);
    const size_t cols = rows.empty() ? 0 : rows[0].layout.total_dimension();
    out << rows.size() << ' ' << cols << '\n';
    char buf[64];
    for (size_t r = 0; r < rows.size(); ++r) {
        std::vector<double> dense = rows[r].to_dense();
        for (size_t c = 0; c < dense.size(); ++c) {
            if (dense[c] == 0.0) continue;
            std::snprintf(buf, sizeof(buf), "%zu %zu %.17g\n", r, c, dense[c]);
            out << buf;
        }
    }
}

}  // namespace finsent
