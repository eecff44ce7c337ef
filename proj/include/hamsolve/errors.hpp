#pragma once

#include <stdexcept>
#include <string>

namespace hamsolve {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An analytic function was applied outside its domain (log/sqrt of a
/// non-positive value, fractional power of a negative base, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid user configuration: grid sizes, intervals, hbar = 0, BC counts.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Leading coefficient of a linear operator vanishes at a grid node.
class SingularOperatorError : public Error {
 public:
  using Error::Error;
};

/// BC-modified linear system is numerically singular.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class GridMismatchError : public Error {
 public:
  using Error::Error;
};

/// Expression or problem-file syntax error. `line()` is 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0) : Error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace hamsolve
