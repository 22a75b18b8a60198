#pragma once

#include <stdexcept>
#include <string>

namespace finsent {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input text is not valid UTF-8.
struct EncodingError : Error {
    using Error::Error;
};

// Malformed on-disk data (lexicon TSV, embedding file, model file, dataset line).
struct FormatError : Error {
    using Error::Error;
};

// A token was queried that is not in the vocabulary.
struct OovError : Error {
    explicit OovError(const std::string& token)
        : Error("out-of-vocabulary token: '" + token + "'"), token(token) {}
    std::string token;
};

// Inconsistent experiment configuration (e.g. BoE enabled without embeddings).
struct ConfigError : Error {
    using Error::Error;
};

// Feature vector does not match the layout a model was trained with.
struct DimensionError : Error {
    using Error::Error;
};

// Training produced a non-finite loss.
struct DivergenceError : Error {
    using Error::Error;
};

// Dataset too small (or otherwise unusable) for the requested split.
struct SplitError : Error {
    using Error::Error;
};

// Corpus cannot support training (fewer than two vocabulary types).
struct DegenerateCorpusError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace finsent
