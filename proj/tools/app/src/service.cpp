#include "planrec/app/service.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <httplib.h>
#include <json.hpp>

#include "planrec/corpus.hpp"
#include "planrec/error.hpp"
#include "planrec/model_io.hpp"
#include "planrec/recognizer.hpp"

namespace planrec::app {
namespace {

using nlohmann::ordered_json;

HttpReply error_reply(int status, const std::string& message) {
  return {status, ordered_json{{"error", message}}.dump(), 0.0};
}

}  // namespace

SuggestService::SuggestService(EmbeddingModel model, ServiceConfig config)
    : model_(std::move(model)), config_(std::move(config)), model_id_(planrec::model_id(model_)) {}

HttpReply SuggestService::suggest(std::string_view body) const {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const SuggestRequest req = parse_suggest_request(body);
    if (req.observation.empty()) return error_reply(400, "observation must not be empty");
    if (req.observation.size() > config_.max_observation) {
      return error_reply(413, "observation length " + std::to_string(req.observation.size()) +
                                  " exceeds the limit of " + std::to_string(config_.max_observation));
    }
    if (auto unknown = unknown_tokens(req.observation, model_.vocabulary()); !unknown.empty()) {
      ordered_json doc{{"error", "unknown actions in observation"}, {"unknown_tokens", unknown}};
      return {422, doc.dump(), 0.0};
    }
    const DupConfig cfg = resolve_config(req, config_.defaults, model_.vocab_size());
    const Observation obs = make_observation(req.observation, model_.vocabulary());
    const RecognitionResult result = dup_recognize(model_, obs, cfg);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return {200, response_to_json(make_response(model_, result, model_id_, ms), false), ms};
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::kFormat:
      case ErrorCode::kInvalidConfig:
      case ErrorCode::kInvalidInput:
        return error_reply(400, e.what());
      case ErrorCode::kUnknownAction:
        return error_reply(422, e.what());
      default:
        return error_reply(500, e.what());
    }
  }
}

HttpReply SuggestService::vocab() const {
  ordered_json tokens = ordered_json::array();
  const auto& v = model_.vocabulary();
  for (ActionId id = 0; id < v.size(); ++id) tokens.push_back({{"token", v.token(id)}, {"count", v.count(id)}});
  return {200, ordered_json{{"tokens", std::move(tokens)}}.dump(), 0.0};
}

HttpReply SuggestService::health() const {
  ordered_json doc{{"status", "ok"},
                   {"model_id", model_id_},
                   {"dim", model_.dim()},
                   {"window", model_.window()},
                   {"vocab_size", model_.vocab_size()}};
  return {200, doc.dump(), 0.0};
}

void SuggestService::mount(httplib::Server& server) const {
  auto send = [](httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    res.set_content(reply.body, "application/json");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", reply.elapsed_ms);
    res.set_header("X-Elapsed-Ms", buf);
  };
  server.Post("/api/suggest", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, suggest(req.body));
  });
  server.Get("/api/vocab", [this, send](const httplib::Request&, httplib::Response& res) { send(res, vocab()); });
  server.Get("/api/health", [this, send](const httplib::Request&, httplib::Response& res) { send(res, health()); });
  if (!config_.static_dir.empty() && std::filesystem::is_directory(config_.static_dir)) {
    server.set_mount_point("/", config_.static_dir);
  }
}

BindAddress parse_bind(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size()) {
    fail(ErrorCode::kInvalidConfig, "bind address must look like host:port, got '" + std::string(text) + "'");
  }
  BindAddress out;
  out.host = std::string(text.substr(0, colon));
  const std::string port(text.substr(colon + 1));
  char* end = nullptr;
  const long p = std::strtol(port.c_str(), &end, 10);
  if (*end != '\0' || p < 0 || p > 65535) fail(ErrorCode::kInvalidConfig, "invalid port '" + port + "'");
  out.port = static_cast<int>(p);
  return out;
}

std::string default_bind(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv(kBindEnvVar); env && *env) return env;
  return std::string(kDefaultBind);
}

bool run_server(const SuggestService& service, const BindAddress& bind) {
  httplib::Server server;
  service.mount(server);
  std::cerr << "planrec: serving model " << service.model_id() << " on " << bind.host << ":" << bind.port << "\n";
  return server.listen(bind.host, bind.port);
}

}  // namespace planrec::app
