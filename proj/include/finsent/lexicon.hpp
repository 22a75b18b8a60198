#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace finsent {

// Six Loughran-McDonald financial classes plus the three MPQA prior
// polarities.
enum class WordClass : uint8_t {
    LmPositive = 0,
    LmNegative,
    LmConstraining,
    LmLitigious,
    LmUncertain,
    LmModal,
    MpqaPositive,
    MpqaNegative,
    MpqaNeutral,
};

constexpr size_t kWordClassCount = 9;

const std::string& word_class_name(WordClass c);

// Throws FormatError for unknown names.
WordClass word_class_from_name(const std::string& name);

// Small set of WordClass values.
class WordClassSet {
public:
    WordClassSet() = default;

    void insert(WordClass c) { bits_ |= mask(c); }
    bool contains(WordClass c) const { return bits_ & mask(c); }
    bool empty() const { return bits_ == 0; }
    void merge(WordClassSet other) { bits_ |= other.bits_; }
    size_t count() const;

    bool operator==(const WordClassSet&) const = default;

private:
    static uint16_t mask(WordClass c) {
        return static_cast<uint16_t>(1u << static_cast<uint8_t>(c));
    }
    uint16_t bits_ = 0;
};

// Word -> class-set map with lowercase single-token keys. Immutable after
// load; lookups of absent words return the empty set.
struct Lexicon {
    std::unordered_map<std::string, WordClassSet> entries;
    std::string source_name;

    WordClassSet classes_of(const std::string& word) const;
    size_t size() const { return entries.size(); }
};

// Canonical on-disk form: one "word<TAB>CLASS" per line, '#' comments
// ignored. Repeated words union their classes. Unknown class labels raise
// FormatError with the line number.
Lexicon load_normalized(const std::string& path);

struct MpqaImportStats {
    size_t imported = 0;
    size_t skipped_multiword = 0;
    size_t skipped_missing_word = 0;
};

// Reads the MPQA space-separated key=value record format, mapping
// priorpolarity positive/negative/neutral to the MPQA_* classes
// ("both" yields positive and negative).
Lexicon import_mpqa(const std::string& path, MpqaImportStats* stats = nullptr);

// Union of entries with per-word class-set union; commutative and
// associative.
Lexicon merge(const std::vector<Lexicon>& lexicons);

}  // namespace finsent
