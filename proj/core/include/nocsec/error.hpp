#pragma once

#include <stdexcept>
#include <string>

namespace nocsec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or configuration value.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Ciphertext or packet payload that fails structural checks.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

/// A ciphertext is missing one or more of its blocks.
class IncompleteCiphertextError : public Error {
 public:
  using Error::Error;
};

class ReassemblyError : public Error {
 public:
  using Error::Error;
};

class RoutingError : public Error {
 public:
  using Error::Error;
};

/// Malformed config or trace input. `line` is 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The simulator made no progress for the configured number of cycles.
class DeadlockError : public Error {
 public:
  using Error::Error;
};

}  // namespace nocsec
