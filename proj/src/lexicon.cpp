#include "finsent/lexicon.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <fstream>
#include <sstream>

#include "finsent/errors.hpp"

namespace finsent {

namespace {

const std::array<std::string, kWordClassCount> kClassNames = {
    "LM_POSITIVE",   "LM_NEGATIVE", "LM_CONSTRAINING",
    "LM_LITIGIOUS",  "LM_UNCERTAIN", "LM_MODAL",
    "MPQA_POSITIVE", "MPQA_NEGATIVE", "MPQA_NEUTRAL",
};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return s;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

const std::string& word_class_name(WordClass c) {
    return kClassNames[static_cast<size_t>(c)];
}

WordClass word_class_from_name(const std::string& name) {
    for (size_t i = 0; i < kClassNames.size(); ++i)
        if (kClassNames[i] == name) return static_cast<WordClass>(i);
    throw FormatError("unknown word class '" + name + "'");
}

size_t WordClassSet::count() const {
    size_t n = 0;
    for (size_t i = 0; i < kWordClassCount; ++i)
        if (contains(static_cast<WordClass>(i))) ++n;
    return n;
}

WordClassSet Lexicon::classes_of(const std::string& word) const {
    auto it = entries.find(word);
    return it == entries.end() ? WordClassSet{} : it->second;
}

Lexicon load_normalized(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open lexicon file " + path);

    Lexicon lex;
    lex.source_name = path;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t tab = t.find('\t');
        if (tab == std::string::npos)
            throw FormatError(path + ":" + std::to_string(line_no) +
                              ": expected 'word<TAB>CLASS', got '" + t + "'");
        std::string word = lower(trim(t.substr(0, tab)));
        std::string label = trim(t.substr(tab + 1));
        if (word.empty())
            throw FormatError(path + ":" + std::to_string(line_no) + ": empty word");
        WordClass cls;
        try {
            cls = word_class_from_name(label);
        } catch (const FormatError&) {
            throw FormatError(path + ":" + std::to_string(line_no) +
                              ": unknown class label '" + label + "'");
        }
        lex.entries[word].insert(cls);
    }
    return lex;
}

Lexicon import_mpqa(const std::string& path, MpqaImportStats* stats) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open MPQA file " + path);

    Lexicon lex;
    lex.source_name = path;
    MpqaImportStats local;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;

        std::string word, polarity;
        std::istringstream fields(line);
        std::string field;
        while (fields >> field) {
            size_t eq = field.find('=');
            if (eq == std::string::npos) continue;
            std::string key = field.substr(0, eq);
            std::string value = field.substr(eq + 1);
            if (key == "word1") word = value;
            else if (key == "priorpolarity") polarity = value;
        }
        if (word.empty()) {
            ++local.skipped_missing_word;
            continue;
        }
        if (word.find(' ') != std::string::npos ||
            word.find('_') != std::string::npos) {
            // MPQA multiword entries use '_' separators
            ++local.skipped_multiword;
            continue;
        }
        WordClassSet classes;
        if (polarity == "positive") classes.insert(WordClass::MpqaPositive);
        else if (polarity == "negative") classes.insert(WordClass::MpqaNegative);
        else if (polarity == "neutral") classes.insert(WordClass::MpqaNeutral);
        else if (polarity == "both") {
            classes.insert(WordClass::MpqaPositive);
            classes.insert(WordClass::MpqaNegative);
        }
        if (classes.empty()) continue;
        lex.entries[lower(word)].merge(classes);
        ++local.imported;
    }
    if (stats) *stats = local;
    return lex;
}

Lexicon merge(const std::vector<Lexicon>& lexicons) {
    Lexicon out;
    std::string name;
    for (const auto& lex : lexicons) {
        for (const auto& [word, classes] : lex.entries) out.entries[word].merge(classes);
        if (!name.empty()) name += "+";
        name += lex.source_name;
    }
    out.source_name = name;
    return out;
}

}  // namespace finsent
