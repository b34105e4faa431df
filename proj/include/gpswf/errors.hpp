#pragma once

#include <stdexcept>
#include <string>

namespace gpswf {

// An iterative kernel (eigen-iteration, root finder, continued fraction)
// failed to converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The Jacobi-basis truncation was too small for the requested eigenpairs.
class TruncationError : public NumericError {
 public:
  TruncationError(const std::string& what, int used, int required)
      : NumericError(what), used_(used), required_(required) {}

  int used() const noexcept { return used_; }
  int required() const noexcept { return required_; }

 private:
  int used_;
  int required_;
};

// A theorem hypothesis is not met by the given (alpha, c, n).
class InadmissibleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace gpswf
