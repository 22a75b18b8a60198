#pragma once

// Internal helpers for the line-oriented text containers (model and
// pipeline files). Not installed; include from src/ only.

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "finsent/errors.hpp"

namespace finsent::detail {

// Hexadecimal float text keeps every bit of the double, so a reloaded
// artifact computes exactly like the original.
inline std::string hex_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

struct LineReader {
    std::istream& in;
    std::string path;
    size_t line_no = 0;

    bool next(std::vector<std::string>& tokens) {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            tokens.clear();
            std::istringstream split(line);
            std::string tok;
            while (split >> tok) tokens.push_back(tok);
            if (!tokens.empty()) return true;
        }
        return false;
    }

    std::vector<std::string> expect(const std::string& keyword, size_t arg_count) {
        std::vector<std::string> tokens;
        if (!next(tokens))
            throw FormatError(path + ": unexpected end of file, expected '" +
                              keyword + "'");
        if (tokens[0] != keyword)
            throw FormatError(path + ":" + std::to_string(line_no) +
                              ": expected '" + keyword + "', found '" +
                              tokens[0] + "'");
        if (tokens.size() != arg_count + 1)
            throw FormatError(path + ":" + std::to_string(line_no) + ": '" +
                              keyword + "' needs " + std::to_string(arg_count) +
                              " values, found " + std::to_string(tokens.size() - 1));
        return tokens;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw FormatError(path + ":" + std::to_string(line_no) + ": " + message);
    }
};

inline double parse_double(LineReader& reader, const std::string& text) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        reader.fail("'" + text + "' is not a number");
    return v;
}

inline long long parse_int(LineReader& reader, const std::string& text) {
    char* end = nullptr;
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0')
        reader.fail("'" + text + "' is not an integer");
    return v;
}

inline size_t parse_size(LineReader& reader, const std::string& text) {
    const long long v = parse_int(reader, text);
    if (v < 0) reader.fail("'" + text + "' must not be negative");
    return static_cast<size_t>(v);
}

inline std::vector<double> read_values(LineReader& reader,
                                       const std::string& keyword, size_t count) {
    std::vector<std::string> tokens = reader.expect(keyword, count);
    std::vector<double> values(count);
    for (size_t i = 0; i < count; ++i)
        values[i] = parse_double(reader, tokens[i + 1]);
    return values;
}

inline void write_values(std::ostream& out, const std::string& keyword,
                         std::span<const double> values) {
    out << keyword;
    for (double v : values) out << ' ' << hex_double(v);
    out << '\n';
}

}  // namespace finsent::detail
