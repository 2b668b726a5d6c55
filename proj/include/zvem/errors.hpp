#pragma once

#include <stdexcept>
#include <string>

namespace zvem {

/// Bad user-facing input (sizes, names, parameter values).
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A cell with (numerically) zero area or an untriangulable loop.
class DegenerateCell : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A local basis or Gram system lost rank; usually a badly shaped cell.
class NumericalDegeneracy : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Mesh file that does not follow the line grammar.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Mesh file that parses but references missing or inconsistent entities.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SingularSystem : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace zvem
