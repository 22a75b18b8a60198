#pragma once

#include <string>
#include <unordered_set>
#include <vector>

namespace finsent {

// One bucket of the number-to-string mapping. Lower bound inclusive, upper
// bound exclusive; the final bucket is open-ended (hi = +inf).
struct NumberBin {
    double lo;
    double hi;
    std::string label;
};

struct NormalizationConfig {
    std::unordered_set<std::string> stopwords;
    std::vector<std::string> company_aliases;
    std::vector<NumberBin> number_bins;
    bool apply_stopword_removal = true;

    // Bins 0-10, 10-20, 20-50, 50-100, >100; no stopwords or aliases loaded.
    static NormalizationConfig defaults();

    // Label of the bin containing |value|.
    const std::string& bin_label(double value) const;

    bool is_bin_label(const std::string& token) const;
};

struct TokenizedDocument {
    std::vector<std::string> tokens;
    std::string source_id;
};

// Replaces cash amounts ($/€ followed by a number) with _cash_amount_, then
// cashtags ($ + 1-6 letters) and company aliases (case-insensitive,
// longest-match-first) with _company_. Cash runs first so "$5" is cash while
// "$AMZN" is a company. Throws EncodingError on invalid UTF-8.
std::string obfuscate(const std::string& text, const NormalizationConfig& config);

// Maps standalone +/- and numeric sign prefixes to "plus"/"minus", numeric
// literals to their bin label, "B"/"M" number suffixes to "billions"/
// "millions", % to "percent", ? and ! to "question_mark"/"exclamation_mark".
// Expects obfuscate() to have run so remaining numbers are not cash amounts.
std::string map_numbers_and_signs(const std::string& text,
                                  const NormalizationConfig& config);

// Whitespace split, separation of leading/trailing punctuation, lowercasing,
// pure-punctuation drop and (optionally) stopword removal. The placeholders
// _company_/_cash_amount_, bin labels, emoticons (:) :( :D ;)) and #hashtags
// survive as single tokens.
TokenizedDocument tokenize(const std::string& text,
                           const NormalizationConfig& config,
                           const std::string& source_id = "");

// tokenize(map_numbers_and_signs(obfuscate(text))). The single entry point
// used for train/test instances and embedding corpora alike.
TokenizedDocument preprocess(const std::string& text,
                             const NormalizationConfig& config,
                             const std::string& source_id = "");

// True iff the byte string is well-formed UTF-8.
bool is_valid_utf8(const std::string& text);

// One entry per line; blank lines ignored. Aliases additionally skip
// '#'-prefixed comment lines.
std::unordered_set<std::string> load_stopwords(const std::string& path);
std::vector<std::string> load_company_aliases(const std::string& path);

}  // namespace finsent
