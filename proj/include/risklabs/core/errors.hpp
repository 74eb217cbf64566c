#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace risklabs {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments, malformed records, shape mismatches. Maps to CLI exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A record in a text file could not be parsed; carries the 1-based line.
class ParseError : public InputError {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what)
      : InputError(source + ":" + std::to_string(line) + ": " + what),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

/// Non-finite losses, degenerate likelihoods. Maps to CLI exit code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// File system failures. Maps to CLI exit code 4.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A predictor asked for data dated after its as-of date.
class LookAheadError : public Error {
 public:
  using Error::Error;
};

/// Remote analyzer failures (timeouts, 5xx after retries, malformed payloads).
class RemoteError : public Error {
 public:
  using Error::Error;
};

}  // namespace risklabs
