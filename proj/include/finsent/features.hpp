#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "finsent/embedding.hpp"
#include "finsent/lexicon.hpp"
#include "finsent/vocabulary.hpp"

namespace finsent {

enum FeatureBlock : unsigned {
    kBlockBow = 1u << 0,
    kBlockLex = 1u << 1,
    kBlockBoe = 1u << 2,
};
using FeatureBlocks = unsigned;

// 6 LM binaries + LM polarity + 3 MPQA binaries + MPQA polarity.
constexpr size_t kLexiconFeatureCount = 11;

// Describes which blocks are enabled and where each one starts in the
// concatenated vector. Block order is fixed: BoW, lexicon, embeddings.
struct FeatureLayout {
    size_t bow_size = 0;
    size_t lexicon_size = 0;
    size_t embedding_size = 0;
    FeatureBlocks enabled_blocks = 0;

    static FeatureLayout make(FeatureBlocks blocks, size_t bow_vocab_size,
                              size_t embedding_dims);

    bool has(FeatureBlock b) const { return enabled_blocks & b; }
    size_t bow_offset() const { return 0; }
    size_t lex_offset() const { return bow_size; }
    size_t boe_offset() const { return bow_size + lexicon_size; }
    size_t total_dimension() const {
        return bow_size + lexicon_size + embedding_size;
    }

    bool operator==(const FeatureLayout&) const = default;
};

// Sparse BoW counts plus the dense lexicon and embedding blocks.
struct FeatureVector {
    std::vector<std::pair<uint32_t, double>> bow;  // (index, count), index ascending
    std::array<double, kLexiconFeatureCount> lex{};
    std::vector<double> boe;
    FeatureLayout layout;

    std::vector<double> to_dense() const;
};

// N-gram vocabulary over the training documents only, min count 1. N-grams
// above 1 are joined with '_' ("a_b"). The default follows the unigram
// setting.
Vocabulary fit_bow_vocabulary(const std::vector<TokenizedDocument>& train_docs,
                              int ngram_max = 1);

// Raw term counts of in-vocabulary n-grams; anything out of vocabulary
// contributes nothing.
std::vector<std::pair<uint32_t, double>> bow_vector(const TokenizedDocument& doc,
                                                    const Vocabulary& vocab,
                                                    int ngram_max = 1);

// Fixed order: LM pos, LM neg, LM constraining, LM litigious, LM uncertain,
// LM modal, LM polarity, MPQA pos, MPQA neg, MPQA neutral, MPQA polarity.
// Binaries flag any class match; polarity = (pos - neg) / max(1, tokens).
std::array<double, kLexiconFeatureCount> lexicon_features(
    const TokenizedDocument& doc, const Lexicon& lex);

// Mean of the input vectors of in-vocabulary tokens; zero vector when none
// are in vocabulary.
std::vector<double> bag_of_embeddings(const TokenizedDocument& doc,
                                      const EmbeddingMatrix& matrix);

// Concatenates the enabled blocks. Passing nullptr for a component whose
// block is enabled raises ConfigError.
FeatureVector assemble(const TokenizedDocument& doc, const FeatureLayout& layout,
                       const Vocabulary* bow_vocab, const Lexicon* lex,
                       const EmbeddingMatrix* matrix, int ngram_max = 1);

// Sparse text dump ("<rows> <cols>" header then "row col value" triplets),
// for debugging and cross-implementation diffing.
void dump_feature_matrix(const std::vector<FeatureVector>& rows,
                         const std::string& path);

}  // namespace finsent
