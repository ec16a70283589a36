#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace recipechat {

/// Remote sentence encoder: POST {"texts": [...]} -> {"vectors": [[...]]}.
struct EmbeddingEndpoint {
  std::string url;       // full URL of the embed route
  std::string auth_env;  // env var holding a bearer token; empty for none
  int timeout_ms = 10000;
  std::size_t batch_size = 64;
  std::size_t max_in_flight = 4;
};

using Embedding = std::vector<float>;

class EmbeddingClient {
 public:
  virtual ~EmbeddingClient() = default;
  /// One vector per input, in input order. Throws ScorerUnavailableError.
  virtual std::vector<Embedding> embed(const std::vector<std::string>& texts) const = 0;
};

/// Splits the input into batches, sends up to max_in_flight of them at once
/// and reassembles the vectors in input order.
class HttpEmbeddingClient final : public EmbeddingClient {
 public:
  explicit HttpEmbeddingClient(EmbeddingEndpoint endpoint);
  std::vector<Embedding> embed(const std::vector<std::string>& texts) const override;

 private:
  std::vector<Embedding> embed_batch(const std::vector<std::string>& texts) const;
  EmbeddingEndpoint endpoint_;
};

}  // namespace recipechat
