#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracdim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments or inputs the caller could have avoided.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

class ParseError : public ArgumentError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ArgumentError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

// The fitted growth exponent does not yield a finite dimension (beta >= 1 or
// the power-weighted sums vanish).
class UndefinedDimensionError : public Error {
 public:
  UndefinedDimensionError(const std::string& what, double beta)
      : Error(what), beta_(beta) {}
  double beta() const noexcept { return beta_; }

 private:
  double beta_;
};

class SingularSimilarityError : public Error {
 public:
  SingularSimilarityError(const std::string& what, double scale)
      : Error(what), scale_(scale) {}
  double scale() const noexcept { return scale_; }

 private:
  double scale_;
};

}  // namespace fracdim
