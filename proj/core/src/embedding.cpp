#include "recipechat/embedding.hpp"

#include <algorithm>
#include <future>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "http_util.hpp"

namespace recipechat {

HttpEmbeddingClient::HttpEmbeddingClient(EmbeddingEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  if (endpoint_.url.empty()) throw ValidationError("embedding endpoint URL is empty");
  if (endpoint_.timeout_ms <= 0) throw ValidationError("embedding timeout must be positive");
  endpoint_.batch_size = std::max<std::size_t>(endpoint_.batch_size, 1);
  endpoint_.max_in_flight = std::max<std::size_t>(endpoint_.max_in_flight, 1);
}

std::vector<Embedding> HttpEmbeddingClient::embed_batch(const std::vector<std::string>& texts) const {
  const auto url = detail::split_url(endpoint_.url);
  httplib::Client cli(url.origin);
  if (!cli.is_valid()) throw ScorerUnavailableError("unsupported embedding endpoint " + endpoint_.url);
  const auto timeout = std::chrono::milliseconds(endpoint_.timeout_ms);
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);

  httplib::Headers headers;
  try {
    if (auto token = detail::bearer_from_env(endpoint_.auth_env); !token.empty()) {
      headers.emplace("Authorization", "Bearer " + token);
    }
  } catch (const BackendError& e) {
    throw ScorerUnavailableError(e.what());
  }

  const nlohmann::json body = {{"texts", texts}};
  auto res = cli.Post(url.path, headers, body.dump(), "application/json");
  if (!res) {
    throw ScorerUnavailableError("embedding request failed: " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw ScorerUnavailableError("embedding endpoint returned " + std::to_string(res->status) + ": " +
                                 detail::excerpt(res->body));
  }
  try {
    auto j = nlohmann::json::parse(res->body);
    auto vectors = j.at("vectors").get<std::vector<Embedding>>();
    if (vectors.size() != texts.size()) {
      throw ScorerUnavailableError("embedding endpoint returned " + std::to_string(vectors.size()) +
                                   " vectors for " + std::to_string(texts.size()) + " texts");
    }
    return vectors;
  } catch (const nlohmann::json::exception& e) {
    throw ScorerUnavailableError(std::string("malformed embedding response: ") + e.what());
  }
}

std::vector<Embedding> HttpEmbeddingClient::embed(const std::vector<std::string>& texts) const {
  std::vector<std::vector<std::string>> batches;
  for (std::size_t i = 0; i < texts.size(); i += endpoint_.batch_size) {
    auto end = std::min(texts.size(), i + endpoint_.batch_size);
    batches.emplace_back(texts.begin() + static_cast<std::ptrdiff_t>(i),
                         texts.begin() + static_cast<std::ptrdiff_t>(end));
  }

  std::vector<Embedding> out;
  out.reserve(texts.size());
  // Waves of at most max_in_flight concurrent requests; results kept in order.
  for (std::size_t w = 0; w < batches.size(); w += endpoint_.max_in_flight) {
    std::vector<std::future<std::vector<Embedding>>> wave;
    auto end = std::min(batches.size(), w + endpoint_.max_in_flight);
    for (std::size_t b = w; b < end; ++b) {
      wave.push_back(std::async(std::launch::async, [this, &batch = batches[b]] { return embed_batch(batch); }));
    }
    for (auto& f : wave) {
      for (auto& v : f.get()) out.push_back(std::move(v));
    }
  }
  return out;
}

}  // namespace recipechat
