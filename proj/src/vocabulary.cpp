#include "finsent/vocabulary.hpp"

#include <algorithm>

namespace finsent {

Vocabulary Vocabulary::from_counts(
    const std::unordered_map<std::string, int64_t>& counts, int64_t min_count) {
    Vocabulary vocab;
    vocab.min_count_ = min_count;

    std::vector<std::pair<std::string, int64_t>> kept;
    for (const auto& [token, count] : counts) {
        if (count >= min_count) kept.emplace_back(token, count);
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    vocab.index_to_token_.reserve(kept.size());
    vocab.frequency_.reserve(kept.size());
    for (auto& [token, count] : kept) {
        vocab.token_to_index_.emplace(token, static_cast<int64_t>(vocab.index_to_token_.size()));
        vocab.index_to_token_.push_back(std::move(token));
        vocab.frequency_.push_back(count);
        vocab.total_tokens_ += count;
    }
    return vocab;
}

Vocabulary Vocabulary::from_ordered_tokens(const std::vector<std::string>& tokens) {
    Vocabulary vocab;
    vocab.min_count_ = 1;
    for (const auto& token : tokens) {
        auto [it, inserted] = vocab.token_to_index_.emplace(
            token, static_cast<int64_t>(vocab.index_to_token_.size()));
        if (!inserted) continue;
        vocab.index_to_token_.push_back(token);
        vocab.frequency_.push_back(1);
        vocab.total_tokens_ += 1;
    }
    return vocab;
}

int64_t Vocabulary::index_of(const std::string& token) const {
    auto it = token_to_index_.find(token);
    return it == token_to_index_.end() ? -1 : it->second;
}

Vocabulary build_vocabulary(const std::vector<TokenizedDocument>& corpus,
                            int64_t min_count) {
    std::unordered_map<std::string, int64_t> counts;
    for (const auto& doc : corpus)
        for (const auto& token : doc.tokens) ++counts[token];
    return Vocabulary::from_counts(counts, min_count);
}

}  // namespace finsent
