#pragma once

#include <stdexcept>
#include <string>

namespace fdp {

/// Malformed arguments: unknown vertex, non-positive F, bad parameters.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Document could not be parsed. `where()` names the line or field.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
  [[nodiscard]] const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// Requested mode is outside what an algorithm supports (e.g. finite capacity
/// for the tree algorithm, oversized batches in exact mode).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A guarantee that should hold under valid inputs was observed to fail.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace fdp
