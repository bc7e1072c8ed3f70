#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace hamjac {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position` is a 0-based byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownSymbolError : public Error {
 public:
  explicit UnknownSymbolError(std::string symbol)
      : Error("unknown symbol '" + symbol + "'"), symbol_(std::move(symbol)) {}

  const std::string& symbol() const noexcept { return symbol_; }

 private:
  std::string symbol_;
};

/// Evaluation hit a singular locus (division by zero, log of a non-positive
/// value, non-finite result). `coordinate` names the flat coordinate index
/// when it can be attributed.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what, std::optional<std::size_t> coordinate = std::nullopt)
      : Error(what), coordinate_(coordinate) {}

  std::optional<std::size_t> coordinate() const noexcept { return coordinate_; }

 private:
  std::optional<std::size_t> coordinate_;
};

/// A symplectic field was requested for a Hamiltonian that depends on s.
class TimeDependenceError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument to a model constructor or evaluator.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace hamjac
