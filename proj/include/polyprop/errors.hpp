#pragma once

#include <stdexcept>
#include <string>

namespace polyprop {

// Failures of the numerics. The CLI maps these to exit status 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EmptyCone : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoPath : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ZeroLength : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Bad input. The CLI maps these to exit status 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public ValidationError {
 public:
  ParseError(int line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace polyprop
