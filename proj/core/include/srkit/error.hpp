#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace srkit {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Syntax error in an expression or structure file. Line and column are 1-based;
/// line 0 means "single expression, no enclosing file".
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(format(msg, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& msg, std::size_t line, std::size_t column) {
    std::string where = line == 0 ? "column " + std::to_string(column)
                                  : "line " + std::to_string(line) + ", column " + std::to_string(column);
    return where + ": " + msg;
  }

  std::size_t line_;
  std::size_t column_;
};

}  // namespace srkit
