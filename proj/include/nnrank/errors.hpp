#pragma once

#include <stdexcept>
#include <string>

namespace nnrank {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Shape or size mismatch between operands.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& msg) : Error(msg) {}
};

/// Invalid value (negative entry, NaN, bad parameter, ...).
class ValueError : public Error {
 public:
  explicit ValueError(const std::string& msg) : Error(msg) {}
};

/// File-format error; carries the 1-based line where parsing failed.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, long line)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

/// Problem instance exceeds a configured size limit.
class TooLargeError : public Error {
 public:
  explicit TooLargeError(const std::string& msg) : Error(msg) {}
};

}  // namespace nnrank
