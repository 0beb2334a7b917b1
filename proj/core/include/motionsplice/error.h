#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace motionsplice {

// Base class for every domain error raised by the library. The CLI maps any
// Error to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A structural invariant of a Skeleton, MotionSequence or TimedScript failed.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class DegenerateDirection : public Error {
 public:
  using Error::Error;
};

class IncompatibleFacing : public Error {
 public:
  using Error::Error;
};

class ClipTooShort : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class WindowOutOfRange : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

// Malformed motion file or checkpoint. line/column are 1-based; column 0 means
// the whole line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  // The message without the position prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace motionsplice
