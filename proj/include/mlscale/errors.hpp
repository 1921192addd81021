#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mlscale {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition on a value handed to an operation.
class InputError : public Error {
 public:
  using Error::Error;
};

// Bad or missing configuration; never retried. The CLI maps it to exit 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IngestionError : public Error {
 public:
  using Error::Error;
};

// Network-level failure talking to an external service. `delivered` counts
// stream events already handed to the caller before the failure, so a
// caller can tell a clean retry from a mid-stream break.
class TransportError : public Error {
 public:
  explicit TransportError(const std::string& what, std::size_t delivered = 0)
      : Error(what), delivered_(delivered) {}
  std::size_t delivered() const noexcept { return delivered_; }

 private:
  std::size_t delivered_;
};

class StoreError : public Error {
 public:
  using Error::Error;
};

class CorruptionError : public StoreError {
 public:
  CorruptionError(const std::string& file, std::size_t line, const std::string& why)
      : StoreError(file + ":" + std::to_string(line) + ": " + why), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace mlscale
