#pragma once

#include <stdexcept>
#include <string>

namespace wsn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Raised when a Cholesky pivot falls below 1e-12 times the largest diagonal.
/// Usually means two nodes share a position.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class InvalidTheta : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class UnknownNode : public Error {
 public:
  using Error::Error;
};

class StepSizeOutOfRange : public Error {
 public:
  using Error::Error;
};

class TargetUnreachable : public Error {
 public:
  using Error::Error;
};

class InsufficientHistory : public Error {
 public:
  using Error::Error;
};

class ProtocolViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed ingestion CSV; `line()` is 1-based.
class CsvFormatError : public Error {
 public:
  CsvFormatError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace wsn
