#pragma once

#include <stdexcept>
#include <string>

namespace relnotes {

/// Base class for every error raised by the library. `module()` names the
/// subsystem that raised it so the CLI can print module-qualified messages.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message)
      : std::runtime_error(message), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Caller violated a documented precondition (m = 0, n outside {1,2}, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Input document does not follow the expected schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Input is well-formed but breaks a data invariant (duplicate keys, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent configuration (missing resources, bad flags).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class UnknownTagError : public Error {
 public:
  using Error::Error;
};

/// from_tag is not an ancestor of to_tag.
class DisjointReleasesError : public Error {
 public:
  using Error::Error;
};

class GitError : public Error {
 public:
  using Error::Error;
};

class AuthError : public Error {
 public:
  using Error::Error;
};

class RateLimitError : public Error {
 public:
  using Error::Error;
};

/// Transport or unexpected HTTP status from a remote API.
class RemoteError : public Error {
 public:
  using Error::Error;
};

}  // namespace relnotes
