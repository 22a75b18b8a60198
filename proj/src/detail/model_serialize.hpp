#pragma once

// Stream-level model (de)serialization, shared between the standalone
// model file and the pipeline-model container that embeds a model block.

#include <ostream>

#include "detail/text_io.hpp"
#include "finsent/regressors.hpp"

namespace finsent::detail {

// Writes the complete "finsent-model" block, magic line through "end".
void write_model_stream(std::ostream& out, const Model& model);

// Consumes one complete model block from the reader.
Model read_model_stream(LineReader& reader);

}  // namespace finsent::detail
