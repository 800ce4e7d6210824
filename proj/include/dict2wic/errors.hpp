#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dict2wic {

// Base class for every error raised by the library. `kind()` is a stable
// machine-readable tag used by the CLI's error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("parse_error", "line " + std::to_string(line) + ": " + message),
        line_(line),
        reason_(message) {}

  std::size_t line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& message)
      : Error("schema_error", message) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& message)
      : Error("invalid_argument", message) {}
};

// Raised by network clients. Transient failures are retried by callers.
class BackendError : public Error {
 public:
  BackendError(const std::string& message, bool transient)
      : Error(transient ? "backend_transient" : "backend_error", message),
        transient_(transient) {}

  bool transient() const { return transient_; }

 private:
  bool transient_;
};

class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& message)
      : Error("protocol_error", message) {}
};

// Scoring failed for a set of queries; carries the ids involved.
class ScorerError : public Error {
 public:
  ScorerError(const std::string& message, std::vector<std::string> ids)
      : Error("scorer_error", message), ids_(std::move(ids)) {}

  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::vector<std::string> ids_;
};

}  // namespace dict2wic
