#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "finsent/textprep.hpp"

namespace finsent {

// Token -> dense index map with corpus frequencies. Shared by the embedding
// trainer and the bag-of-words featurizer. Indices are assigned by frequency
// (descending, ties broken lexicographically) so a given corpus always maps
// to the same vocabulary.
class Vocabulary {
public:
    Vocabulary() = default;

    // Builds from exact (token, count) pairs, dropping tokens with
    // count < min_count.
    static Vocabulary from_counts(
        const std::unordered_map<std::string, int64_t>& counts, int64_t min_count);

    // Preserves the given order; used when loading embedding files, whose
    // format does not carry frequencies (each entry gets frequency 1).
    // Duplicate tokens are silently collapsed; callers check size().
    static Vocabulary from_ordered_tokens(const std::vector<std::string>& tokens);

    size_t size() const { return index_to_token_.size(); }

    // -1 when the token is unknown.
    int64_t index_of(const std::string& token) const;
    bool contains(const std::string& token) const {
        return token_to_index_.count(token) > 0;
    }

    const std::string& token_at(size_t index) const { return index_to_token_[index]; }
    int64_t frequency_at(size_t index) const { return frequency_[index]; }
    const std::vector<int64_t>& frequencies() const { return frequency_; }

    int64_t min_count() const { return min_count_; }

    // Occurrences of kept tokens across the corpus.
    int64_t total_tokens() const { return total_tokens_; }

private:
    std::unordered_map<std::string, int64_t> token_to_index_;
    std::vector<std::string> index_to_token_;
    std::vector<int64_t> frequency_;
    int64_t min_count_ = 1;
    int64_t total_tokens_ = 0;
};

// Counts tokens across the corpus and keeps those occurring at least
// min_count times. An empty corpus yields an empty vocabulary.
Vocabulary build_vocabulary(const std::vector<TokenizedDocument>& corpus,
                            int64_t min_count);

}  // namespace finsent
