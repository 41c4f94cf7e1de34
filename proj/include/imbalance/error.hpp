#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace imbalance {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration or command-line usage.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. Carries the 1-based line number when one applies.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  /// Same error with `context` (typically a file name) prepended.
  ParseError with_context(const std::string& context) const {
    return ParseError(context + ": " + what(), line_, Raw{});
  }

  std::size_t line() const noexcept { return line_; }

 private:
  struct Raw {};
  ParseError(const std::string& message, std::size_t line, Raw) : Error(message), line_(line) {}

  std::size_t line_;
};

/// Non-fatal diagnostics collected by loaders and resamplers.
using Warnings = std::vector<std::string>;

}  // namespace imbalance
