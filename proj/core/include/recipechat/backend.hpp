#pragma once

#include <memory>
#include <semaphore>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace recipechat {

/// Deterministic backend. The template may use `{first_knowledge_sentence}`,
/// `{state}` and `{intent_names}`; any other `{...}` is rejected.
struct StubBackendConfig {
  std::string template_text;
};

/// POST {base_url}/completions {"model","prompt","max_tokens","temperature"} -> {"text"}.
struct HttpBackendConfig {
  std::string base_url;
  std::string model;
  std::string auth_env;  // name of the env var holding the bearer token
  int timeout_ms = 30000;
  int max_tokens = 64;
  double temperature = 0.7;
  int max_retries = 2;  // transport errors only
  int backoff_ms = 200;
  int max_in_flight = 4;
};

using BackendConfig = std::variant<StubBackendConfig, HttpBackendConfig>;

void validate(const BackendConfig& config);

void to_json(nlohmann::json& j, const BackendConfig& config);
void from_json(const nlohmann::json& j, BackendConfig& config);

/// Values the stub template can reference.
struct CompletionContext {
  std::string first_knowledge_sentence;
  int state = 0;
  std::vector<std::string> intent_names;
};

class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  /// Returns the continuation of `prompt`. Throws BackendError.
  virtual std::string complete(const std::string& prompt, const CompletionContext& context) const = 0;
};

class StubBackend final : public CompletionBackend {
 public:
  explicit StubBackend(StubBackendConfig config);
  std::string complete(const std::string& prompt, const CompletionContext& context) const override;

 private:
  StubBackendConfig config_;
};

/// Thread-safe; at most max_in_flight requests are outstanding at once.
class HttpCompletionBackend final : public CompletionBackend {
 public:
  explicit HttpCompletionBackend(HttpBackendConfig config);
  std::string complete(const std::string& prompt, const CompletionContext& context) const override;

 private:
  std::string attempt(const std::string& prompt) const;

  HttpBackendConfig config_;
  mutable std::counting_semaphore<1024> in_flight_;
};

std::shared_ptr<const CompletionBackend> make_backend(const BackendConfig& config);

/// Convenience wrapper: make_backend(config)->complete(prompt, context).
std::string complete(const BackendConfig& config, const std::string& prompt,
                     const CompletionContext& context = {});

}  // namespace recipechat
