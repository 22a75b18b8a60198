#include "finsent/textprep.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <regex>
#include <sstream>

#include "finsent/errors.hpp"

namespace finsent {

namespace {

const std::string kCompanyToken = "_company_";
const std::string kCashToken = "_cash_amount_";

// Matched before lowercasing and emitted lowercased; ":d" is listed so the
// lowercased form of ":D" is still recognized when output is re-tokenized.
const std::vector<std::string> kEmoticons = {":)", ":(", ":D", ":d", ";)"};

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

std::string ascii_lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return out;
}

// Codepoints treated as punctuation besides ASCII: currency signs, curly
// quotes, dashes, ellipsis, guillemets.
bool is_punct_codepoint(uint32_t cp) {
    if (cp < 0x80) {
        return std::ispunct(static_cast<int>(cp)) && cp != '_';
    }
    switch (cp) {
        case 0x20AC:  // euro
        case 0x00A3:  // pound
        case 0x00A5:  // yen
        case 0x201C:
        case 0x201D:
        case 0x2018:
        case 0x2019:
        case 0x2013:
        case 0x2014:
        case 0x2026:
        case 0x00AB:
        case 0x00BB:
            return true;
        default:
            return false;
    }
}

// Decodes the UTF-8 codepoint starting at byte i; returns its byte length.
// Malformed sequences are passed through as single opaque bytes.
size_t decode_utf8(const std::string& s, size_t i, uint32_t& cp) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
        cp = c;
        return 1;
    }
    size_t len = 0;
    if ((c & 0xE0) == 0xC0) {
        cp = c & 0x1F;
        len = 2;
    } else if ((c & 0xF0) == 0xE0) {
        cp = c & 0x0F;
        len = 3;
    } else if ((c & 0xF8) == 0xF0) {
        cp = c & 0x07;
        len = 4;
    } else {
        cp = 0xFFFD;
        return 1;
    }
    if (i + len > s.size()) {
        cp = 0xFFFD;
        return 1;
    }
    for (size_t k = 1; k < len; ++k) {
        unsigned char cc = static_cast<unsigned char>(s[i + k]);
        if ((cc & 0xC0) != 0x80) {
            cp = 0xFFFD;
            return 1;
        }
        cp = (cp << 6) | (cc & 0x3F);
    }
    return len;
}

std::vector<std::string> whitespace_split(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ' ';
        out += parts[i];
    }
    return out;
}

struct NumberMatch {
    size_t end;           // one past the last consumed byte
    double value;         // numeric value, thousands separators removed
    char suffix;          // 'B', 'M' (either case) or 0
};

// Parses a numeric literal at tok[i]: digits with optional ./, separator
// groups and an optional B/M suffix. Fails when the literal runs into a
// word character, so "4Q" or "2Bn" stay untouched.
std::optional<NumberMatch> parse_number(const std::string& tok, size_t i) {
    size_t n = tok.size();
    if (i >= n || !is_digit(tok[i])) return std::nullopt;
    size_t j = i;
    while (j < n && is_digit(tok[j])) ++j;
    while (j + 1 < n && (tok[j] == '.' || tok[j] == ',') && is_digit(tok[j + 1])) {
        ++j;
        while (j < n && is_digit(tok[j])) ++j;
    }
    std::string digits;
    for (size_t k = i; k < j; ++k)
        if (tok[k] != ',') digits += tok[k];

    NumberMatch m;
    m.suffix = 0;
    m.end = j;
    if (j < n && (tok[j] == 'B' || tok[j] == 'b' || tok[j] == 'M' || tok[j] == 'm') &&
        (j + 1 == n || !is_word_char(tok[j + 1]))) {
        m.suffix = tok[j];
        m.end = j + 1;
    }
    if (m.end < n && is_word_char(tok[m.end])) return std::nullopt;
    try {
        m.value = std::stod(digits);
    } catch (const std::exception&) {
        return std::nullopt;
    }
    return m;
}

bool replace_alias(std::string& text, const std::string& alias) {
    const std::string hay = ascii_lower(text);
    const std::string needle = ascii_lower(alias);
    if (needle.empty()) return false;

    std::string out;
    size_t pos = 0;
    bool replaced = false;
    while (pos < text.size()) {
        size_t hit = hay.find(needle, pos);
        if (hit == std::string::npos) {
            out.append(text, pos, text.size() - pos);
            break;
        }
        size_t end = hit + needle.size();
        bool left_ok = hit == 0 || !is_word_char(hay[hit - 1]);
        bool right_ok = end == hay.size() || !is_word_char(hay[end]);
        if (left_ok && right_ok) {
            out.append(text, pos, hit - pos);
            out += kCompanyToken;
            replaced = true;
            pos = end;
        } else {
            out.append(text, pos, hit - pos + 1);
            pos = hit + 1;
        }
    }
    if (replaced) text = std::move(out);
    return replaced;
}

bool is_emoticon(const std::string& tok) {
    return std::find(kEmoticons.begin(), kEmoticons.end(), tok) != kEmoticons.end();
}

bool is_hashtag(const std::string& tok) {
    if (tok.size() < 2 || tok[0] != '#') return false;
    return std::all_of(tok.begin() + 1, tok.end(),
                       [](char c) { return is_word_char(c); });
}

bool is_protected_token(const std::string& tok, const NormalizationConfig& config) {
    return tok == kCompanyToken || tok == kCashToken || config.is_bin_label(tok) ||
           is_emoticon(tok) || is_hashtag(tok);
}

// Strips edge punctuation and splits off edge emoticons, appending the
// surviving lowercase tokens to out. Stopword filtering happens later.
void split_raw_token(std::string tok, const NormalizationConfig& config,
                     std::vector<std::string>& out) {
    while (!tok.empty()) {
        if (is_protected_token(tok, config)) {
            out.push_back(ascii_lower(tok));
            return;
        }
        bool changed = false;
        for (const auto& emo : kEmoticons) {
            if (tok.size() > emo.size() &&
                tok.compare(tok.size() - emo.size(), emo.size(), emo) == 0) {
                split_raw_token(tok.substr(0, tok.size() - emo.size()), config, out);
                out.push_back(ascii_lower(emo));
                return;
            }
            if (tok.size() > emo.size() && tok.compare(0, emo.size(), emo) == 0) {
                out.push_back(ascii_lower(emo));
                tok = tok.substr(emo.size());
                changed = true;
                break;
            }
        }
        if (changed) continue;

        uint32_t cp;
        size_t head = decode_utf8(tok, 0, cp);
        if (is_punct_codepoint(cp)) {
            tok = tok.substr(head);
            continue;
        }
        // find start of the last codepoint
        size_t last = 0;
        for (size_t i = 0; i < tok.size();) {
            last = i;
            uint32_t ignored;
            i += decode_utf8(tok, i, ignored);
        }
        size_t tail_len = decode_utf8(tok, last, cp);
        if (is_punct_codepoint(cp)) {
            tok = tok.substr(0, tok.size() - tail_len);
            continue;
        }
        out.push_back(ascii_lower(tok));
        return;
    }
}

}  // namespace

NormalizationConfig NormalizationConfig::defaults() {
    NormalizationConfig config;
    config.number_bins = {
        {0.0, 10.0, "0-10"},
        {10.0, 20.0, "10-20"},
        {20.0, 50.0, "20-50"},
        {50.0, 100.0, "50-100"},
        {100.0, std::numeric_limits<double>::infinity(), ">100"},
    };
    return config;
}

const std::string& NormalizationConfig::bin_label(double value) const {
    double v = std::abs(value);
    for (const auto& bin : number_bins) {
        if (v >= bin.lo && v < bin.hi) return bin.label;
    }
    return number_bins.back().label;
}

bool NormalizationConfig::is_bin_label(const std::string& token) const {
    return std::any_of(number_bins.begin(), number_bins.end(),
                       [&](const NumberBin& b) { return b.label == token; });
}

bool is_valid_utf8(const std::string& text) {
    size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        size_t len;
        uint32_t cp;
        if (c < 0x80) {
            i += 1;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + len > text.size()) return false;
        for (size_t k = 1; k < len; ++k) {
            unsigned char cc = static_cast<unsigned char>(text[i + k]);
            if ((cc & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (cc & 0x3F);
        }
        // overlong encodings and surrogates are invalid
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
            (len == 4 && cp < 0x10000) || (cp >= 0xD800 && cp <= 0xDFFF) ||
            cp > 0x10FFFF)
            return false;
        i += len;
    }
    return true;
}

std::string obfuscate(const std::string& text, const NormalizationConfig& config) {
    if (!is_valid_utf8(text))
        throw EncodingError("obfuscate: input is not valid UTF-8");

    // Cash before cashtags so "$5" is cash and "$AMZN" is a company.
    static const std::regex cash_re(
        R"((?:\$|€)\d+(?:[.,]\d+)*[BbMm]?(?![A-Za-z0-9_]))");
    static const std::regex cashtag_re(R"(\$[A-Za-z]{1,6}(?![A-Za-z]))");

    std::string out = std::regex_replace(text, cash_re, kCashToken);
    out = std::regex_replace(out, cashtag_re, kCompanyToken);

    // longest alias first so "JPMorgan Chase" wins over "JPMorgan"
    std::vector<std::string> aliases = config.company_aliases;
    std::sort(aliases.begin(), aliases.end(),
              [](const std::string& a, const std::string& b) {
                  if (a.size() != b.size()) return a.size() > b.size();
                  return a < b;
              });
    for (const auto& alias : aliases) replace_alias(out, alias);
    return out;
}

std::string map_numbers_and_signs(const std::string& text,
                                  const NormalizationConfig& config) {
    std::vector<std::string> pieces;
    for (const std::string& tok : whitespace_split(text)) {
        if (tok == kCompanyToken || tok == kCashToken || config.is_bin_label(tok)) {
            pieces.push_back(tok);
            continue;
        }
        if (tok == "-") {
            pieces.push_back("minus");
            continue;
        }
        if (tok == "+") {
            pieces.push_back("plus");
            continue;
        }
        std::string cur;
        auto flush = [&] {
            if (!cur.empty()) {
                pieces.push_back(cur);
                cur.clear();
            }
        };
        size_t i = 0;
        while (i < tok.size()) {
            char c = tok[i];
            if ((c == '+' || c == '-') && (i == 0 || !is_word_char(tok[i - 1]))) {
                if (auto m = parse_number(tok, i + 1)) {
                    flush();
                    pieces.push_back(c == '-' ? "minus" : "plus");
                    pieces.push_back(config.bin_label(m->value));
                    if (m->suffix == 'B' || m->suffix == 'b')
                        pieces.push_back("billions");
                    else if (m->suffix)
                        pieces.push_back("millions");
                    i = m->end;
                    continue;
                }
            }
            if (is_digit(c) && (i == 0 || !is_word_char(tok[i - 1]))) {
                if (auto m = parse_number(tok, i)) {
                    flush();
                    pieces.push_back(config.bin_label(m->value));
                    if (m->suffix == 'B' || m->suffix == 'b')
                        pieces.push_back("billions");
                    else if (m->suffix)
                        pieces.push_back("millions");
                    i = m->end;
                    continue;
                }
            }
            if (c == '%') {
                flush();
                pieces.push_back("percent");
                ++i;
                continue;
            }
            if (c == '?') {
                flush();
                pieces.push_back("question_mark");
                ++i;
                continue;
            }
            if (c == '!') {
                flush();
                pieces.push_back("exclamation_mark");
                ++i;
                continue;
            }
            cur += c;
            ++i;
        }
        flush();
    }
    return join(pieces);
}

TokenizedDocument tokenize(const std::string& text,
                           const NormalizationConfig& config,
                           const std::string& source_id) {
    TokenizedDocument doc;
    doc.source_id = source_id;
    std::vector<std::string> candidates;
    for (const std::string& raw : whitespace_split(text))
        split_raw_token(raw, config, candidates);

    for (auto& tok : candidates) {
        if (tok.empty()) continue;
        if (config.apply_stopword_removal && config.stopwords.count(tok)) continue;
        doc.tokens.push_back(std::move(tok));
    }
    return doc;
}

TokenizedDocument preprocess(const std::string& text,
                             const NormalizationConfig& config,
                             const std::string& source_id) {
    return tokenize(map_numbers_and_signs(obfuscate(text, config), config),
                    config, source_id);
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open stopword list: " + path);
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (line.empty()) continue;
        words.insert(ascii_lower(line));
    }
    return words;
}

std::vector<std::string> load_company_aliases(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open alias list: " + path);
    std::vector<std::string> aliases;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        aliases.push_back(line);
    }
    return aliases;
}

}  // namespace finsent
