#ifndef WSCAN_ERRORS_HPP
#define WSCAN_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wscan {

/// Base of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Input parsed but violates a dataset invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Binary file (WPK1) or TSV table is not in the expected layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Marker or pair with no non-empty category (everything missing).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Marker or pair with a single non-empty category; no odds contrast exists.
class UntestableError : public Error {
 public:
  using Error::Error;
};

/// Missing or inconsistent h/f configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Bootstrap estimation or null sampling could not proceed.
class EstimationError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument to a numerical routine or public entry point.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace wscan

#endif  // WSCAN_ERRORS_HPP
