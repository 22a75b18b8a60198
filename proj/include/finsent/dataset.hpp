#pragma once

#include <optional>
#include <string>
#include <vector>

namespace finsent {

enum class Genre { Microblog, Headline };

const std::string& genre_name(Genre g);
Genre genre_from_name(const std::string& name);  // FormatError on unknown names

// One (text, target company, gold score) triple. `span` is the annotated
// sentiment-bearing part of the text and is what gets featurized; it
// defaults to the full text.
struct LabeledInstance {
    std::string id;
    std::string text;
    std::string company;
    std::string span;
    std::optional<double> gold_score;  // in [-1, +1] when present
    Genre genre = Genre::Microblog;
};

struct DatasetWarnings {
    std::vector<std::string> duplicate_ids;
};

// JSON-lines with fields id, text, company, span (optional), score
// (optional), genre (optional, defaults to the argument). Lines with scores
// outside [-1, 1] or malformed JSON raise FormatError with the line number.
// Duplicate ids are kept and reported through `warnings`.
std::vector<LabeledInstance> load_dataset(const std::string& path,
                                          Genre default_genre,
                                          DatasetWarnings* warnings = nullptr);

// JSON-lines {"id": ..., "score": ...}, one line per instance.
void save_predictions(const std::vector<std::pair<std::string, double>>& predictions,
                      const std::string& path);
std::vector<std::pair<std::string, double>> load_predictions(const std::string& path);

}  // namespace finsent
