#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nrgen {

/// Machine-readable error classes; the CLI maps each to an exit code.
enum class ErrorClass {
  usage,       // bad flags or arguments
  parse,       // grammar text does not follow the format
  validation,  // grammar violates a structural requirement
  range,       // rank or length outside the admissible range
  exhausted,   // every admissible word has already been produced
  internal,    // an invariant that should always hold was broken
};

std::string_view to_string(ErrorClass cls);

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

/// Grammar syntax error with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class ExhaustedError : public Error {
 public:
  explicit ExhaustedError(const std::string& what) : Error(ErrorClass::exhausted, what) {}
};

class RangeError : public Error {
 public:
  explicit RangeError(const std::string& what) : Error(ErrorClass::range, what) {}
};

class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& what) : Error(ErrorClass::internal, what) {}
};

}  // namespace nrgen
