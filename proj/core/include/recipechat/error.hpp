#pragma once

#include <stdexcept>
#include <string>

namespace recipechat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: corpus lines, snapshot files, backend payloads.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::string raw = {})
      : Error(what), raw_(std::move(raw)) {}

  /// Offending raw text, when there is one worth logging.
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

/// A value violates a documented invariant (config thresholds, gold states).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// A session already has a message in flight.
class ConflictError : public Error {
 public:
  using Error::Error;
};

/// The similarity scorer could not produce scores (embedding endpoint down).
class ScorerUnavailableError : public Error {
 public:
  using Error::Error;
};

/// Failure talking to a completion backend.
class BackendError : public Error {
 public:
  enum class Kind { kTransport, kTimeout, kHttpStatus, kEmptyCompletion, kConfig, kMalformed };

  BackendError(Kind kind, const std::string& what, int status = 0)
      : Error(what), kind_(kind), status_(status) {}

  Kind kind() const noexcept { return kind_; }
  /// HTTP status for kHttpStatus, 0 otherwise.
  int status() const noexcept { return status_; }

 private:
  Kind kind_;
  int status_;
};

}  // namespace recipechat
