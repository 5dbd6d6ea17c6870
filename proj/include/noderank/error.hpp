#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace noderank {

// Problems with input data (malformed files, degenerate inputs). Distinct from
// std::invalid_argument, which is reserved for bad configuration values.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed record in a line-oriented file, or a syntax error in a structured
// one. Exactly one of line/offset is meaningful, depending on the format.
class ParseError : public DataError {
 public:
  enum class Position { Line, ByteOffset };

  ParseError(Position kind, std::size_t where, const std::string& what)
      : DataError((kind == Position::Line ? "line " : "byte offset ") +
                  std::to_string(where) + ": " + what),
        kind_(kind),
        where_(where) {}

  Position position() const noexcept { return kind_; }
  std::size_t where() const noexcept { return where_; }

 private:
  Position kind_;
  std::size_t where_;
};

class EmptyGraphError : public DataError {
 public:
  using DataError::DataError;
};

class UndefinedCorrelationError : public DataError {
 public:
  using DataError::DataError;
};

inline ParseError line_error(std::size_t line, const std::string& what) {
  return ParseError(ParseError::Position::Line, line, what);
}

inline ParseError offset_error(std::size_t offset, const std::string& what) {
  return ParseError(ParseError::Position::ByteOffset, offset, what);
}

}  // namespace noderank
