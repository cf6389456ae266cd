#pragma once

#include <stdexcept>
#include <string>

namespace splitlab {

/// Bad call arguments: K = 0, dimension mismatch, empty trace, bad index.
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// Bad problem configuration: unknown catalogue name, parameter shape, step-size rule.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A reference point or iterate lies outside the domain where a quantity is finite.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Malformed JSON problem or experiment document. `path` names the offending field.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace splitlab
