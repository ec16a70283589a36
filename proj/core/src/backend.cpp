#include "recipechat/backend.hpp"

#include <chrono>
#include <httplib.h>
#include <thread>

#include "http_util.hpp"
#include "recipechat/error.hpp"
#include "recipechat/text.hpp"

namespace recipechat {

using nlohmann::json;

namespace {

constexpr std::string_view kPlaceholders[] = {"first_knowledge_sentence", "state", "intent_names"};

void check_template(const std::string& tmpl) {
  std::size_t pos = 0;
  while ((pos = tmpl.find('{', pos)) != std::string::npos) {
    auto close = tmpl.find('}', pos);
    if (close == std::string::npos) throw ValidationError("unterminated placeholder in stub template");
    auto name = std::string_view(tmpl).substr(pos + 1, close - pos - 1);
    bool known = false;
    for (auto p : kPlaceholders) known = known || p == name;
    if (!known) throw ValidationError("unknown stub placeholder {" + std::string(name) + "}");
    pos = close + 1;
  }
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// RAII slot on the in-flight semaphore.
class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<1024>& s) : s_(s) { s_.acquire(); }
  ~SlotGuard() { s_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<1024>& s_;
};

}  // namespace

void validate(const BackendConfig& config) {
  std::visit(
      [](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, StubBackendConfig>) {
          check_template(c.template_text);
        } else {
          if (c.base_url.empty()) throw ValidationError("backend base_url is empty");
          detail::split_url(c.base_url);
          if (c.timeout_ms <= 0) throw ValidationError("backend timeout must be positive");
          if (c.max_tokens <= 0) throw ValidationError("backend max_tokens must be positive");
          if (c.max_retries < 0) throw ValidationError("backend max_retries must be >= 0");
          if (c.max_in_flight <= 0 || c.max_in_flight > 1024) {
            throw ValidationError("backend max_in_flight must be in 1..1024");
          }
        }
      },
      config);
}

void to_json(json& j, const BackendConfig& config) {
  std::visit(
      [&j](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, StubBackendConfig>) {
          j = json{{"kind", "stub"}, {"template", c.template_text}};
        } else {
          j = json{{"kind", "http"},           {"base_url", c.base_url},
                   {"model", c.model},         {"auth_env", c.auth_env},
                   {"timeout_ms", c.timeout_ms}, {"max_tokens", c.max_tokens},
                   {"temperature", c.temperature}, {"max_retries", c.max_retries},
                   {"backoff_ms", c.backoff_ms}, {"max_in_flight", c.max_in_flight}};
        }
      },
      config);
}

void from_json(const json& j, BackendConfig& config) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "stub") {
    config = StubBackendConfig{j.at("template").get<std::string>()};
  } else if (kind == "http") {
    if (j.contains("auth_token") || j.contains("api_key")) {
      throw ValidationError("backend config must name an env var (auth_env), not embed a token");
    }
    HttpBackendConfig c;
    c.base_url = j.at("base_url").get<std::string>();
    c.model = j.value("model", std::string{});
    c.auth_env = j.value("auth_env", std::string{});
    c.timeout_ms = j.value("timeout_ms", c.timeout_ms);
    c.max_tokens = j.value("max_tokens", c.max_tokens);
    c.temperature = j.value("temperature", c.temperature);
    c.max_retries = j.value("max_retries", c.max_retries);
    c.backoff_ms = j.value("backoff_ms", c.backoff_ms);
    c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
    config = std::move(c);
  } else {
    throw ValidationError("unknown backend kind '" + kind + "'");
  }
  validate(config);
}

StubBackend::StubBackend(StubBackendConfig config) : config_(std::move(config)) {
  check_template(config_.template_text);
}

std::string StubBackend::complete(const std::string& /*prompt*/, const CompletionContext& ctx) const {
  const auto& tmpl = config_.template_text;
  std::string out;
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    auto open = tmpl.find('{', pos);
    if (open == std::string::npos) {
      out.append(tmpl, pos);
      break;
    }
    out.append(tmpl, pos, open - pos);
    auto close = tmpl.find('}', open);
    auto name = std::string_view(tmpl).substr(open + 1, close - open - 1);
    if (name == "first_knowledge_sentence") {
      out += ctx.first_knowledge_sentence;
    } else if (name == "state") {
      out += std::to_string(ctx.state);
    } else {
      out += join(ctx.intent_names, ", ");
    }
    pos = close + 1;
  }
  if (trim(out).empty()) throw BackendError(BackendError::Kind::kEmptyCompletion, "stub produced an empty completion");
  return out;
}

HttpCompletionBackend::HttpCompletionBackend(HttpBackendConfig config)
    : config_(std::move(config)), in_flight_(config_.max_in_flight) {
  validate(BackendConfig{config_});
}

std::string HttpCompletionBackend::attempt(const std::string& prompt) const {
  const auto url = detail::split_url(config_.base_url);
  httplib::Client cli(url.origin);
  if (!cli.is_valid()) {
    throw BackendError(BackendError::Kind::kConfig, "unsupported backend URL " + config_.base_url);
  }
  const auto timeout = std::chrono::milliseconds(config_.timeout_ms);
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);

  httplib::Headers headers;
  if (auto token = detail::bearer_from_env(config_.auth_env); !token.empty()) {
    headers.emplace("Authorization", "Bearer " + token);
  }
  const json body = {{"model", config_.model},
                     {"prompt", prompt},
                     {"max_tokens", config_.max_tokens},
                     {"temperature", config_.temperature}};

  const auto started = std::chrono::steady_clock::now();
  auto res = cli.Post(detail::join_path(url.path, "/completions"), headers, body.dump(), "application/json");
  if (!res) {
    const auto err = res.error();
    const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                           (err == httplib::Error::Read && std::chrono::steady_clock::now() - started >= timeout);
    throw BackendError(timed_out ? BackendError::Kind::kTimeout : BackendError::Kind::kTransport,
                       "completion request failed: " + httplib::to_string(err));
  }
  if (res->status < 200 || res->status >= 300) {
    throw BackendError(BackendError::Kind::kHttpStatus,
                       "backend returned HTTP " + std::to_string(res->status) + ": " + detail::excerpt(res->body),
                       res->status);
  }
  std::string text;
  try {
    text = json::parse(res->body).at("text").get<std::string>();
  } catch (const json::exception& e) {
    throw BackendError(BackendError::Kind::kMalformed, std::string("malformed backend response: ") + e.what());
  }
  if (text.starts_with(prompt)) text.erase(0, prompt.size());
  auto trimmed = trim(text);
  if (trimmed.empty()) throw BackendError(BackendError::Kind::kEmptyCompletion, "backend returned an empty completion");
  return std::string(trimmed);
}

std::string HttpCompletionBackend::complete(const std::string& prompt, const CompletionContext&) const {
  if (prompt.empty()) throw BackendError(BackendError::Kind::kConfig, "empty prompt");
  SlotGuard slot(in_flight_);
  for (int tries = 0;; ++tries) {
    try {
      return attempt(prompt);
    } catch (const BackendError& e) {
      const bool transport = e.kind() == BackendError::Kind::kTransport || e.kind() == BackendError::Kind::kTimeout;
      if (!transport || tries >= config_.max_retries) throw;
      std::this_thread::sleep_for(std::chrono::milliseconds(config_.backoff_ms) * (1 << tries));
    }
  }
}

std::shared_ptr<const CompletionBackend> make_backend(const BackendConfig& config) {
  validate(config);
  return std::visit(
      [](const auto& c) -> std::shared_ptr<const CompletionBackend> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, StubBackendConfig>) {
          return std::make_shared<StubBackend>(c);
        } else {
          return std::make_shared<HttpCompletionBackend>(c);
        }
      },
      config);
}

std::string complete(const BackendConfig& config, const std::string& prompt, const CompletionContext& context) {
  return make_backend(config)->complete(prompt, context);
}

}  // namespace recipechat
