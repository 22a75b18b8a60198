#pragma once

// Synthetic corpora with known geometric structure, shared by the embedding
// unit tests and the acceptance gate.

#include <string>
#include <vector>

#include "finsent/embedding.hpp"
#include "finsent/rng.hpp"
#include "finsent/textprep.hpp"

namespace fixtures {

inline const std::vector<std::string>& topic_a() {
    static const std::vector<std::string> v = {"bull0", "bull1", "bull2", "bull3", "bull4"};
    return v;
}

inline const std::vector<std::string>& topic_b() {
    static const std::vector<std::string> v = {"bear0", "bear1", "bear2", "bear3", "bear4"};
    return v;
}

// Sentences drawn entirely from one of two disjoint topics. Words of a topic
// only ever co-occur with each other, so their vectors should cluster.
inline std::vector<finsent::TokenizedDocument> cluster_corpus(int sentences,
                                                              uint64_t seed) {
    finsent::Rng rng(seed);
    std::vector<finsent::TokenizedDocument> corpus;
    corpus.reserve(sentences);
    for (int s = 0; s < sentences; ++s) {
        const auto& topic = (s % 2 == 0) ? topic_a() : topic_b();
        finsent::TokenizedDocument d;
        d.tokens.reserve(8);
        for (int t = 0; t < 8; ++t) {
            d.tokens.push_back(topic[rng.index(topic.size())]);
        }
        corpus.push_back(std::move(d));
    }
    return corpus;
}

// Mean within-topic cosine minus mean across-topic cosine.
inline double cluster_margin(const finsent::EmbeddingMatrix& emb) {
    auto mean_cos = [&](const std::vector<std::string>& xs,
                        const std::vector<std::string>& ys, bool same) {
        double sum = 0.0;
        int n = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
            for (size_t j = same ? i + 1 : 0; j < ys.size(); ++j) {
                sum += finsent::cosine_similarity(emb.vector_of(xs[i]),
                                                  emb.vector_of(ys[j]));
                ++n;
            }
        }
        return sum / n;
    };
    double intra = 0.5 * (mean_cos(topic_a(), topic_a(), true) +
                          mean_cos(topic_b(), topic_b(), true));
    double inter = mean_cos(topic_a(), topic_b(), false);
    return intra - inter;
}

// Factorized corpus for analogy checks. Four target words combine an asset
// factor with a direction factor; each sentence surrounds one target with two
// words from each factor's context pool, so
//   vec(gold_up) - vec(gold_down) + vec(oil_down) ~ vec(oil_up).
struct AnalogyTargets {
    std::string a = "gold_up";
    std::string b = "gold_down";
    std::string c = "oil_down";
    std::string expected = "oil_up";
};

inline std::vector<finsent::TokenizedDocument> analogy_corpus(int per_target,
                                                              uint64_t seed) {
    static const std::vector<std::string> up_ctx = {"rally", "surge", "gain",
                                                    "bullish", "soar"};
    static const std::vector<std::string> down_ctx = {"plunge", "slump", "drop",
                                                      "bearish", "sink"};
    static const std::vector<std::string> gold_ctx = {"metal", "bullion", "mine",
                                                      "ounce", "karat"};
    static const std::vector<std::string> oil_ctx = {"crude", "barrel", "refinery",
                                                     "drill", "pipeline"};
    struct Target {
        std::string word;
        const std::vector<std::string>* asset;
        const std::vector<std::string>* dir;
    };
    static const std::vector<Target> targets = {
        {"gold_up", &gold_ctx, &up_ctx},
        {"gold_down", &gold_ctx, &down_ctx},
        {"oil_up", &oil_ctx, &up_ctx},
        {"oil_down", &oil_ctx, &down_ctx},
    };

    finsent::Rng rng(seed);
    std::vector<finsent::TokenizedDocument> corpus;
    corpus.reserve(static_cast<size_t>(per_target) * targets.size());
    for (int s = 0; s < per_target; ++s) {
        for (const auto& tgt : targets) {
            auto pick = [&](const std::vector<std::string>& pool) {
                return pool[rng.index(pool.size())];
            };
            finsent::TokenizedDocument d;
            d.tokens = {pick(*tgt.asset), pick(*tgt.dir), tgt.word,
                        pick(*tgt.asset), pick(*tgt.dir)};
            corpus.push_back(std::move(d));
        }
    }
    return corpus;
}

}  // namespace fixtures
