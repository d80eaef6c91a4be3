#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lowrank {

/// Argument outside the documented domain (negative input, rank out of range, non-finite entries).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operands whose dimensions do not agree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The SVD backend reported non-convergence.
class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(const std::string& what, long iterations)
      : std::runtime_error(what), iterations_(iterations) {}

  /// Iterations reported by the backend, or -1 when the backend does not expose a count.
  long iterations() const noexcept { return iterations_; }

 private:
  long iterations_;
};

/// Solver configuration rejected before iterating.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. `offset()` is the byte offset (or line number for text formats) of the failure.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// File exists but uses a variant of the format that is not handled.
class UnsupportedFormat : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lowrank
