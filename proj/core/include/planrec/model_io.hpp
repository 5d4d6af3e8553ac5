#pragma once

#include <string>
#include <string_view>

#include "planrec/embedding.hpp"

namespace planrec {

inline constexpr int kModelFormatVersion = 1;

// JSON document: {format_version, dim, window, vocab: [{token, count}],
// input_vectors, inner_vectors, paths, codes}. Doubles are written with
// round-trip precision.
std::string model_to_json(const EmbeddingModel& model);
EmbeddingModel model_from_json(std::string_view text);

void save_model(const EmbeddingModel& model, const std::string& path);
EmbeddingModel load_model(const std::string& path);

// Short stable fingerprint of the serialized model (16 hex digits).
std::string model_id(const EmbeddingModel& model);

}  // namespace planrec
