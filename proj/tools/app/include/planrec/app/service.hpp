#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "planrec/app/suggest.hpp"
#include "planrec/embedding.hpp"

namespace httplib {
class Server;
}

namespace planrec::app {

inline constexpr std::size_t kDefaultMaxObservation = 256;
inline constexpr std::string_view kDefaultBind = "127.0.0.1:8080";
inline constexpr const char* kBindEnvVar = "PLANREC_BIND";

struct ServiceConfig {
  RecognizeDefaults defaults;
  std::size_t max_observation = kDefaultMaxObservation;
  std::string static_dir;  // served at / when non-empty and present
};

struct HttpReply {
  int status = 200;
  std::string body;
  double elapsed_ms = 0.0;
};

// Stateless request handlers over one immutable model.
class SuggestService {
 public:
  SuggestService(EmbeddingModel model, ServiceConfig config);

  HttpReply suggest(std::string_view body) const;
  HttpReply vocab() const;
  HttpReply health() const;

  const EmbeddingModel& model() const noexcept { return model_; }
  const std::string& model_id() const noexcept { return model_id_; }
  const ServiceConfig& config() const noexcept { return config_; }

  // Registers /api/suggest, /api/vocab, /api/health (and static files).
  void mount(httplib::Server& server) const;

 private:
  EmbeddingModel model_;
  ServiceConfig config_;
  std::string model_id_;
};

struct BindAddress {
  std::string host;
  int port = 0;
};

// "host:port"; throws Error(kInvalidConfig) when malformed.
BindAddress parse_bind(std::string_view text);

// Explicit flag, else $PLANREC_BIND, else kDefaultBind.
std::string default_bind(const std::string& flag_value);

// Blocks until the server stops. Returns false when binding fails.
bool run_server(const SuggestService& service, const BindAddress& bind);

}  // namespace planrec::app
