#include "finsent/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "finsent/errors.hpp"

namespace finsent {

using nlohmann::json;

const std::string& genre_name(Genre g) {
    static const std::string microblog = "microblog";
    static const std::string headline = "headline";
    return g == Genre::Microblog ? microblog : headline;
}

Genre genre_from_name(const std::string& name) {
    if (name == "microblog") return Genre::Microblog;
    if (name == "headline") return Genre::Headline;
    throw FormatError("unknown genre '" + name + "' (expected microblog|headline)");
}

std::vector<LabeledInstance> load_dataset(const std::string& path,
                                          Genre default_genre,
                                          DatasetWarnings* warnings) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset " + path);

    std::vector<LabeledInstance> instances;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw FormatError(path + ":" + std::to_string(line_no) +
                              ": malformed JSON: " + e.what());
        }
        auto fail = [&](const std::string& msg) -> FormatError {
            return FormatError(path + ":" + std::to_string(line_no) + ": " + msg);
        };
        if (!rec.is_object()) throw fail("expected a JSON object");
        if (!rec.contains("id") || !rec["id"].is_string())
            throw fail("missing string field 'id'");
        if (!rec.contains("text") || !rec["text"].is_string())
            throw fail("missing string field 'text'");

        LabeledInstance inst;
        inst.id = rec["id"].get<std::string>();
        inst.text = rec["text"].get<std::string>();
        if (inst.text.empty()) throw fail("field 'text' must be non-empty");
        inst.company = rec.value("company", std::string{});
        inst.span = rec.value("span", inst.text);
        if (inst.span.empty()) inst.span = inst.text;
        if (rec.contains("score") && !rec["score"].is_null()) {
            if (!rec["score"].is_number()) throw fail("field 'score' must be a number");
            double score = rec["score"].get<double>();
            if (!std::isfinite(score) || score < -1.0 || score > 1.0)
                throw fail("score " + std::to_string(score) +
                           " outside [-1, 1]");
            inst.gold_score = score;
        }
        inst.genre = rec.contains("genre")
                         ? genre_from_name(rec["genre"].get<std::string>())
                         : default_genre;

        if (!seen_ids.insert(inst.id).second && warnings)
            warnings->duplicate_ids.push_back(inst.id);
        instances.push_back(std::move(inst));
    }
    return instances;
}

void save_predictions(const std::vector<std::pair<std::string, double>>& predictions,
                      const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write predictions to " + path);
    char buf[32];
    for (const auto& [id, score] : predictions) {
        std::snprintf(buf, sizeof(buf), "%.9g", score);
        json rec{{"id", id}, {"score", json::parse(buf)}};
        out << rec.dump() << '\n';
    }
}

std::vector<std::pair<std::string, double>> load_predictions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open predictions file " + path);
    std::vector<std::pair<std::string, double>> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw FormatError(path + ":" + std::to_string(line_no) +
                              ": malformed JSON: " + e.what());
        }
        if (!rec.contains("id") || !rec.contains("score") ||
            !rec["score"].is_number())
            throw FormatError(path + ":" + std::to_string(line_no) +
                              ": expected fields 'id' and numeric 'score'");
        out.emplace_back(rec["id"].get<std::string>(), rec["score"].get<double>());
    }
    return out;
}

}  // namespace finsent
