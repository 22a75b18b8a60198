#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "finsent/matrix.hpp"
#include "finsent/rng.hpp"
#include "finsent/vocabulary.hpp"

namespace finsent {

struct SkipgramConfig {
    int dimensions = 50;
    int window = 5;
    int negatives = 25;
    int64_t min_count = 5;
    int epochs = 5;
    double initial_learning_rate = 0.025;
    uint64_t seed = 1;
    double unigram_power = 0.75;
    int threads = 1;
};

// Learned word vectors. input_vectors are the embeddings proper; the
// output (context) vectors are kept because training updates both sides.
struct EmbeddingMatrix {
    Matrix input_vectors;
    Matrix output_vectors;
    Vocabulary vocabulary;

    size_t dimensions() const { return input_vectors.cols(); }
    std::span<const double> vector_of(const std::string& token) const;
};

struct SkipgramTrainResult {
    EmbeddingMatrix embeddings;
    std::vector<double> epoch_loss;  // mean per-pair surrogate loss, one per epoch
};

// Draws word indices with probability frequency^power / sum(frequency^power)
// via inversion of the cumulative distribution.
class NegativeSampler {
public:
    NegativeSampler(const Vocabulary& vocabulary, double power);
    size_t sample(Rng& rng) const;

private:
    std::vector<double> cumulative_;
};

// Negative-sampling loss for a single (center, context, negatives) triple:
//   -log sigmoid(u_ctx . v) - sum_i log sigmoid(-u_neg_i . v)
// The trainer steps along the analytic gradient of exactly this function, so
// checking it against finite differences checks the training update.
double sgns_pair_loss(std::span<const double> center,
                      std::span<const double> context,
                      const std::vector<std::span<const double>>& negatives);

struct SgnsPairGradient {
    std::vector<double> center;
    std::vector<double> context;
    std::vector<std::vector<double>> negatives;
};

SgnsPairGradient sgns_pair_gradient(
    std::span<const double> center, std::span<const double> context,
    const std::vector<std::span<const double>>& negatives);

// Skip-gram with negative sampling over the tokenized corpus. Single-threaded
// runs are bit-reproducible for a fixed seed; multi-threaded runs apply
// unsynchronized updates and are only statistically equivalent. Throws
// DegenerateCorpusError when fewer than two types survive pruning and
// DivergenceError (naming the epoch) if the loss turns non-finite.
SkipgramTrainResult train_skipgram(const std::vector<TokenizedDocument>& corpus,
                                   const SkipgramConfig& config);

// Cosine of two vectors; zero-norm vectors have similarity 0 to everything.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

// Vocabulary words ranked by cosine to the query's input vector, query
// excluded. Returns at most min(top_k, V-1) entries. Throws OovError.
std::vector<std::pair<std::string, double>> most_similar(
    const std::string& query, const EmbeddingMatrix& matrix, size_t top_k);

// Words ranked by cosine to vector(a) - vector(b) + vector(c); a, b and c
// are excluded from the results.
std::vector<std::pair<std::string, double>> analogy(
    const std::string& a, const std::string& b, const std::string& c,
    const EmbeddingMatrix& matrix, size_t top_k);

// Text format: line 1 "<V> <d>", then one "<token> <v1> ... <vd>" per word.
void save_embeddings(const EmbeddingMatrix& matrix, const std::string& path);
EmbeddingMatrix load_embeddings(const std::string& path);

}  // namespace finsent
