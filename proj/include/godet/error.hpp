#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace godet {

/// Operand shapes do not chain.
struct ShapeError : std::runtime_error {
  explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

/// File cannot be opened, read, or written.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input file; carries the offending line number when known.
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_number(line) {}
  std::size_t line_number;
};

/// A documented precondition was violated by the caller.
struct ContractError : std::runtime_error {
  explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid configuration value.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Training produced a non-finite loss.
struct DivergedError : std::runtime_error {
  DivergedError(const std::string& msg, std::size_t at_epoch)
      : std::runtime_error(msg + " at epoch " + std::to_string(at_epoch)), epoch(at_epoch) {}
  std::size_t epoch;
};

}  // namespace godet
