#include "planrec/app/suggest.hpp"

#include <algorithm>

#include <json.hpp>

#include "planrec/error.hpp"

namespace planrec::app {

using nlohmann::json;
using nlohmann::ordered_json;

SuggestRequest parse_suggest_request(std::string_view body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    fail(ErrorCode::kFormat, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::kFormat, "request body must be a JSON object");
  SuggestRequest req;
  try {
    const auto& obs = doc.at("observation");
    if (!obs.is_array()) fail(ErrorCode::kFormat, "'observation' must be an array of strings");
    for (const auto& t : obs) {
      if (!t.is_string()) fail(ErrorCode::kFormat, "'observation' must be an array of strings");
      req.observation.push_back(t.get<std::string>());
    }
    auto count = [&](const char* key) -> std::optional<std::size_t> {
      if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
      const auto& v = doc[key];
      if (!v.is_number_integer() || v.get<long long>() < 0) {
        fail(ErrorCode::kFormat, std::string("'") + key + "' must be a non-negative integer");
      }
      return v.get<std::size_t>();
    };
    req.m = count("m");
    req.iterations = count("iterations");
    if (auto s = count("seed")) req.seed = *s;
    if (doc.contains("delta") && !doc["delta"].is_null()) {
      if (!doc["delta"].is_number()) fail(ErrorCode::kFormat, "'delta' must be a number");
      req.delta = doc["delta"].get<double>();
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kFormat, std::string("bad request: ") + e.what());
  }
  return req;
}

DupConfig resolve_config(const SuggestRequest& request, const RecognizeDefaults& defaults,
                         std::size_t vocab_size) {
  DupConfig cfg = defaults.dup;
  if (request.m) cfg.m = *request.m;
  if (request.iterations) cfg.iterations = *request.iterations;
  if (request.delta) cfg.delta = *request.delta;
  if (request.seed) cfg.seed = *request.seed;
  if (cfg.m < 1) fail(ErrorCode::kInvalidConfig, "m must be at least 1");
  cfg.m = std::min(cfg.m, vocab_size);
  return cfg;
}

SuggestResponse make_response(const EmbeddingModel& model, const RecognitionResult& result,
                              std::string model_id, double elapsed_ms) {
  const auto& vocab = model.vocabulary();
  SuggestResponse resp;
  for (const auto& hole : result.suggestions) {
    HoleEntry entry{hole.position, {}};
    for (const auto& s : hole.ranked) entry.suggestions.push_back({vocab.token(s.action), s.weight});
    resp.holes.push_back(std::move(entry));
  }
  for (ActionId a : result.completed.actions) resp.completed.push_back(vocab.token(a));
  resp.objective = result.objective;
  resp.model_id = std::move(model_id);
  resp.elapsed_ms = elapsed_ms;
  return resp;
}

std::string response_to_json(const SuggestResponse& response, bool include_elapsed) {
  ordered_json holes = ordered_json::array();
  for (const auto& h : response.holes) {
    ordered_json ranked = ordered_json::array();
    for (const auto& s : h.suggestions) ranked.push_back({{"action", s.action}, {"weight", s.weight}});
    holes.push_back({{"position", h.position}, {"suggestions", std::move(ranked)}});
  }
  ordered_json doc;
  doc["holes"] = std::move(holes);
  doc["completed"] = response.completed;
  doc["objective"] = response.objective;
  doc["model_id"] = response.model_id;
  if (include_elapsed) doc["elapsed_ms"] = response.elapsed_ms;
  return doc.dump();
}

}  // namespace planrec::app
