#ifndef SIGKER_ERRORS_HPP
#define SIGKER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sigker {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands disagree on dimension, degree or grid size.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A precondition on values was violated (scalar slot, window, partition...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed external input (CSV, configuration).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A non-finite value appeared during a computation.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace sigker

#endif  // SIGKER_ERRORS_HPP
