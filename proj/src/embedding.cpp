#include "finsent/embedding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "finsent/errors.hpp"

namespace finsent {

namespace {

// log(sigmoid(x)) without overflow for large |x|.
double log_sigmoid(double x) {
    if (x >= 0.0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

struct EncodedCorpus {
    std::vector<std::vector<int64_t>> docs;
    int64_t total_pairs = 0;
};

EncodedCorpus encode(const std::vector<TokenizedDocument>& corpus,
                     const Vocabulary& vocab, int window) {
    EncodedCorpus enc;
    enc.docs.reserve(corpus.size());
    for (const auto& doc : corpus) {
        std::vector<int64_t> ids;
        ids.reserve(doc.tokens.size());
        for (const auto& tok : doc.tokens) {
            int64_t id = vocab.index_of(tok);
            if (id >= 0) ids.push_back(id);
        }
        int64_t len = static_cast<int64_t>(ids.size());
        for (int64_t t = 0; t < len; ++t)
            enc.total_pairs += std::min<int64_t>(t, window) +
                               std::min<int64_t>(len - 1 - t, window);
        if (!ids.empty()) enc.docs.push_back(std::move(ids));
    }
    return enc;
}

class LearningRate {
public:
    LearningRate(double initial, int64_t planned_updates)
        : initial_(initial), planned_(std::max<int64_t>(planned_updates, 1)) {}

    // Linear decay to 1e-4 of the initial rate across all planned updates.
    double at(int64_t update) const {
        double lr = initial_ * (1.0 - static_cast<double>(update) /
                                          static_cast<double>(planned_));
        return std::max(lr, initial_ * 1e-4);
    }

private:
    double initial_;
    int64_t planned_;
};

struct WorkerResult {
    double loss_sum = 0.0;
    int64_t pair_count = 0;
};

// Trains one shard of documents for one epoch. `matrix` rows are updated in
// place; with several workers the writes race (hogwild).
void train_shard(EmbeddingMatrix& matrix, const std::vector<std::vector<int64_t>>& docs,
                 size_t begin_doc, size_t end_doc, const SkipgramConfig& config,
                 const NegativeSampler& sampler, const LearningRate& schedule,
                 std::atomic<int64_t>& global_updates, Rng rng, WorkerResult& result) {
    const size_t dim = matrix.dimensions();
    std::vector<int64_t> negatives;
    std::vector<std::span<const double>> neg_views;
    std::vector<double> center_grad_buf;

    for (size_t di = begin_doc; di < end_doc; ++di) {
        const auto& sent = docs[di];
        const int64_t len = static_cast<int64_t>(sent.size());
        for (int64_t t = 0; t < len; ++t) {
            const int64_t center = sent[t];
            const int64_t lo = std::max<int64_t>(0, t - config.window);
            const int64_t hi = std::min<int64_t>(len - 1, t + config.window);
            for (int64_t j = lo; j <= hi; ++j) {
                if (j == t) continue;
                const int64_t context = sent[j];

                negatives.clear();
                for (int k = 0; k < config.negatives; ++k) {
                    int64_t cand = static_cast<int64_t>(sampler.sample(rng));
                    if (cand == context) continue;  // drawn the positive, drop it
                    negatives.push_back(cand);
                }
                neg_views.clear();
                for (int64_t n : negatives)
                    neg_views.push_back(matrix.output_vectors.row(static_cast<size_t>(n)));

                auto center_vec = matrix.input_vectors.row(static_cast<size_t>(center));
                auto context_vec = matrix.output_vectors.row(static_cast<size_t>(context));

                result.loss_sum += sgns_pair_loss(center_vec, context_vec, neg_views);
                ++result.pair_count;

                SgnsPairGradient grad =
                    sgns_pair_gradient(center_vec, context_vec, neg_views);

                const int64_t update_index =
                    global_updates.fetch_add(1, std::memory_order_relaxed);
                const double lr = schedule.at(update_index);

                center_grad_buf = grad.center;
                for (size_t d = 0; d < dim; ++d)
                    context_vec[d] -= lr * grad.context[d];
                for (size_t n = 0; n < negatives.size(); ++n) {
                    auto neg_vec =
                        matrix.output_vectors.row(static_cast<size_t>(negatives[n]));
                    for (size_t d = 0; d < dim; ++d)
                        neg_vec[d] -= lr * grad.negatives[n][d];
                }
                for (size_t d = 0; d < dim; ++d)
                    center_vec[d] -= lr * center_grad_buf[d];
            }
        }
    }
}

}  // namespace

std::span<const double> EmbeddingMatrix::vector_of(const std::string& token) const {
    int64_t id = vocabulary.index_of(token);
    if (id < 0) throw OovError(token);
    return input_vectors.row(static_cast<size_t>(id));
}

NegativeSampler::NegativeSampler(const Vocabulary& vocabulary, double power) {
    if (vocabulary.size() == 0)
        throw DegenerateCorpusError("negative sampler: empty vocabulary");
    cumulative_.resize(vocabulary.size());
    double total = 0.0;
    for (size_t i = 0; i < vocabulary.size(); ++i) {
        total += std::pow(static_cast<double>(vocabulary.frequency_at(i)), power);
        cumulative_[i] = total;
    }
}

size_t NegativeSampler::sample(Rng& rng) const {
    double u = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<size_t>(it - cumulative_.begin());
}

double sgns_pair_loss(std::span<const double> center,
                      std::span<const double> context,
                      const std::vector<std::span<const double>>& negatives) {
    double loss = -log_sigmoid(dot(context, center));
    for (const auto& neg : negatives) loss -= log_sigmoid(-dot(neg, center));
    return loss;
}

SgnsPairGradient sgns_pair_gradient(
    std::span<const double> center, std::span<const double> context,
    const std::vector<std::span<const double>>& negatives) {
    const size_t dim = center.size();
    SgnsPairGradient grad;
    grad.center.assign(dim, 0.0);
    grad.context.assign(dim, 0.0);
    grad.negatives.resize(negatives.size());

    // d(-log sig(u.v))/du = (sig(u.v) - 1) v, and symmetrically for v
    const double g_pos = sigmoid(dot(context, center)) - 1.0;
    for (size_t d = 0; d < dim; ++d) {
        grad.context[d] = g_pos * center[d];
        grad.center[d] = g_pos * context[d];
    }
    // d(-log sig(-u.v))/du = sig(u.v) v
    for (size_t n = 0; n < negatives.size(); ++n) {
        const double g_neg = sigmoid(dot(negatives[n], center));
        grad.negatives[n].assign(dim, 0.0);
        for (size_t d = 0; d < dim; ++d) {
            grad.negatives[n][d] = g_neg * center[d];
            grad.center[d] += g_neg * negatives[n][d];
        }
    }
    return grad;
}

SkipgramTrainResult train_skipgram(const std::vector<TokenizedDocument>& corpus,
                                   const SkipgramConfig& config) {
    Vocabulary vocab = build_vocabulary(corpus, config.min_count);
    if (vocab.size() < 2)
        throw DegenerateCorpusError(
            "skip-gram training needs at least 2 vocabulary types, got " +
            std::to_string(vocab.size()));

    const size_t V = vocab.size();
    const size_t dim = static_cast<size_t>(config.dimensions);

    SkipgramTrainResult result;
    result.embeddings.vocabulary = std::move(vocab);
    result.embeddings.input_vectors = Matrix(V, dim);
    result.embeddings.output_vectors = Matrix(V, dim);

    Rng init_rng(config.seed);
    const double bound = 0.5 / static_cast<double>(dim);
    for (size_t i = 0; i < V; ++i) {
        auto row = result.embeddings.input_vectors.row(i);
        for (size_t d = 0; d < dim; ++d) row[d] = init_rng.uniform(-bound, bound);
    }

    if (config.epochs <= 0) return result;

    EncodedCorpus enc = encode(corpus, result.embeddings.vocabulary, config.window);
    NegativeSampler sampler(result.embeddings.vocabulary, config.unigram_power);
    LearningRate schedule(config.initial_learning_rate,
                          static_cast<int64_t>(config.epochs) * enc.total_pairs);
    std::atomic<int64_t> global_updates{0};

    const int threads = std::max(1, config.threads);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        double loss_sum = 0.0;
        int64_t pair_count = 0;
        if (threads == 1) {
            WorkerResult wr;
            train_shard(result.embeddings, enc.docs, 0, enc.docs.size(), config,
                        sampler, schedule, global_updates,
                        Rng(config.seed + static_cast<uint64_t>(epoch) + 1), wr);
            loss_sum = wr.loss_sum;
            pair_count = wr.pair_count;
        } else {
            std::vector<WorkerResult> results(threads);
            std::vector<std::thread> workers;
            const size_t chunk = (enc.docs.size() + threads - 1) / threads;
            for (int w = 0; w < threads; ++w) {
                size_t begin = std::min(enc.docs.size(), w * chunk);
                size_t end = std::min(enc.docs.size(), begin + chunk);
                uint64_t worker_seed = config.seed +
                                       static_cast<uint64_t>(epoch) * 0x9E3779B9u +
                                       static_cast<uint64_t>(w + 1) * 0x85EBCA6Bu;
                workers.emplace_back(train_shard, std::ref(result.embeddings),
                                     std::cref(enc.docs), begin, end,
                                     std::cref(config), std::cref(sampler),
                                     std::cref(schedule), std::ref(global_updates),
                                     Rng(worker_seed), std::ref(results[w]));
            }
            for (auto& t : workers) t.join();
            for (const auto& wr : results) {
                loss_sum += wr.loss_sum;
                pair_count += wr.pair_count;
            }
        }
        double mean_loss =
            pair_count > 0 ? loss_sum / static_cast<double>(pair_count) : 0.0;
        if (!std::isfinite(mean_loss))
            throw DivergenceError("skip-gram loss diverged at epoch " +
                                  std::to_string(epoch + 1));
        result.epoch_loss.push_back(mean_loss);
    }
    return result;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    double na = std::sqrt(dot(a, a));
    double nb = std::sqrt(dot(b, b));
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot(a, b) / (na * nb);
}

namespace {

std::vector<std::pair<std::string, double>> rank_by_cosine(
    std::span<const double> target, const EmbeddingMatrix& matrix,
    const std::vector<int64_t>& excluded, size_t top_k) {
    std::vector<std::pair<size_t, double>> scored;
    scored.reserve(matrix.vocabulary.size());
    for (size_t i = 0; i < matrix.vocabulary.size(); ++i) {
        if (std::find(excluded.begin(), excluded.end(),
                      static_cast<int64_t>(i)) != excluded.end())
            continue;
        scored.emplace_back(i, cosine_similarity(target, matrix.input_vectors.row(i)));
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (scored.size() > top_k) scored.resize(top_k);

    std::vector<std::pair<std::string, double>> out;
    out.reserve(scored.size());
    for (const auto& [idx, cos] : scored)
        out.emplace_back(matrix.vocabulary.token_at(idx), cos);
    return out;
}

}  // namespace

std::vector<std::pair<std::string, double>> most_similar(
    const std::string& query, const EmbeddingMatrix& matrix, size_t top_k) {
    int64_t id = matrix.vocabulary.index_of(query);
    if (id < 0) throw OovError(query);
    return rank_by_cosine(matrix.input_vectors.row(static_cast<size_t>(id)),
                          matrix, {id}, top_k);
}

std::vector<std::pair<std::string, double>> analogy(
    const std::string& a, const std::string& b, const std::string& c,
    const EmbeddingMatrix& matrix, size_t top_k) {
    std::vector<int64_t> ids;
    for (const auto* tok : {&a, &b, &c}) {
        int64_t id = matrix.vocabulary.index_of(*tok);
        if (id < 0) throw OovError(*tok);
        ids.push_back(id);
    }
    const size_t dim = matrix.dimensions();
    std::vector<double> target(dim);
    auto va = matrix.input_vectors.row(static_cast<size_t>(ids[0]));
    auto vb = matrix.input_vectors.row(static_cast<size_t>(ids[1]));
    auto vc = matrix.input_vectors.row(static_cast<size_t>(ids[2]));
    for (size_t d = 0; d < dim; ++d) target[d] = va[d] - vb[d] + vc[d];
    return rank_by_cosine(target, matrix, ids, top_k);
}

void save_embeddings(const EmbeddingMatrix& matrix, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write embeddings to " + path);
    const size_t V = matrix.vocabulary.size();
    const size_t dim = matrix.dimensions();
    out << V << ' ' << dim << '\n';
    char buf[64];
    for (size_t i = 0; i < V; ++i) {
        out << matrix.vocabulary.token_at(i);
        auto row = matrix.input_vectors.row(i);
        for (size_t d = 0; d < dim; ++d) {
            std::snprintf(buf, sizeof(buf), " %.17g", row[d]);
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw IoError("failed while writing embeddings to " + path);
}

EmbeddingMatrix load_embeddings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open embeddings file " + path);

    std::string line;
    if (!std::getline(in, line))
        throw FormatError(path + ":1: missing embedding header");
    std::istringstream header(line);
    int64_t v = -1, d = -1;
    std::string extra;
    if (!(header >> v >> d) || (header >> extra) || v < 0 || d < 1)
        throw FormatError(path + ":1: malformed header '" + line + "'");

    EmbeddingMatrix matrix;
    matrix.input_vectors = Matrix(static_cast<size_t>(v), static_cast<size_t>(d));
    matrix.output_vectors = Matrix(static_cast<size_t>(v), static_cast<size_t>(d));

    std::vector<std::string> tokens;
    tokens.reserve(static_cast<size_t>(v));
    for (int64_t i = 0; i < v; ++i) {
        const int64_t line_no = i + 2;
        if (!std::getline(in, line))
            throw FormatError(path + ":" + std::to_string(line_no) +
                              ": expected " + std::to_string(v) +
                              " vector rows, file ended early");
        std::istringstream row(line);
        std::string token;
        if (!(row >> token))
            throw FormatError(path + ":" + std::to_string(line_no) + ": empty row");
        auto dest = matrix.input_vectors.row(static_cast<size_t>(i));
        for (int64_t k = 0; k < d; ++k) {
            if (!(row >> dest[static_cast<size_t>(k)]))
                throw FormatError(path + ":" + std::to_string(line_no) +
                                  ": row has fewer than " + std::to_string(d) +
                                  " values or a non-numeric field");
        }
        double trailing;
        if (row >> trailing)
            throw FormatError(path + ":" + std::to_string(line_no) +
                              ": row has more than " + std::to_string(d) + " values");
        tokens.push_back(token);
    }
    matrix.vocabulary = Vocabulary::from_ordered_tokens(tokens);
    if (matrix.vocabulary.size() != static_cast<size_t>(v))
        throw FormatError(path + ": duplicate token in embedding file");
    return matrix;
}

}  // namespace finsent
