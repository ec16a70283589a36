#pragma once

#include <cstdlib>
#include <string>

#include "recipechat/error.hpp"

namespace recipechat::detail {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // always starts with '/'
};

inline SplitUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ValidationError("URL without scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

/// Joins a base path and a route without doubling the slash.
inline std::string join_path(std::string base, const std::string& route) {
  while (!base.empty() && base.back() == '/') base.pop_back();
  return base + route;
}

/// Reads a bearer token from the named env var; empty name means no auth.
inline std::string bearer_from_env(const std::string& env_name) {
  if (env_name.empty()) return {};
  const char* v = std::getenv(env_name.c_str());
  if (v == nullptr || *v == '\0') {
    throw BackendError(BackendError::Kind::kConfig, "auth env var " + env_name + " is not set");
  }
  return v;
}

inline std::string excerpt(const std::string& body, std::size_t limit = 200) {
  return body.size() <= limit ? body : body.substr(0, limit) + "...";
}

}  // namespace recipechat::detail
