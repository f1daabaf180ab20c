#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace curvfam {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (evaluation point
/// outside [0, 2pi], generator evaluated outside its table, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A level is (numerically) a critical value of the function it was asked
/// about, so its level set is not a finite set of transversal crossings.
class CriticalValue : public Error {
 public:
  CriticalValue(const std::string& what, double level)
      : Error(what), level_(level) {}
  double level() const noexcept { return level_; }

 private:
  double level_;
};

/// Explicitly supplied data violates a structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An operation was called with an input that does not meet its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration refused because the index set is larger than the cap.
class CapExceeded : public Error {
 public:
  CapExceeded(std::size_t size, std::size_t cap);
  std::size_t size() const noexcept { return size_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t size_;
  std::size_t cap_;
};

/// Malformed text input; carries the 1-based line number of the offending line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace curvfam
