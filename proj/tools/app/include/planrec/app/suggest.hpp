#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "planrec/embedding.hpp"
#include "planrec/recognizer.hpp"

namespace planrec::app {

struct SuggestRequest {
  std::vector<std::string> observation;  // "??" marks holes
  std::optional<std::size_t> m;
  std::optional<std::size_t> iterations;
  std::optional<double> delta;
  std::optional<std::uint64_t> seed;
};

// Throws Error(kFormat) on malformed JSON or wrongly typed fields.
SuggestRequest parse_suggest_request(std::string_view body);

struct RankedAction {
  std::string action;
  double weight = 0.0;
};

struct HoleEntry {
  std::size_t position = 0;
  std::vector<RankedAction> suggestions;
};

struct SuggestResponse {
  std::vector<HoleEntry> holes;
  std::vector<std::string> completed;
  double objective = 0.0;
  std::string model_id;
  double elapsed_ms = 0.0;
};

// Process-level defaults for recognition; built from CLI flags.
struct RecognizeDefaults {
  DupConfig dup;  // dup.m is the default suggestion count
};

// Request overrides > configured defaults. m is clamped to |vocab|.
DupConfig resolve_config(const SuggestRequest& request, const RecognizeDefaults& defaults,
                         std::size_t vocab_size);

SuggestResponse make_response(const EmbeddingModel& model, const RecognitionResult& result,
                              std::string model_id, double elapsed_ms);

std::string response_to_json(const SuggestResponse& response, bool include_elapsed);

}  // namespace planrec::app
