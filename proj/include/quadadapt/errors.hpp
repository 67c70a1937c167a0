#pragma once

#include <stdexcept>
#include <string>

namespace quadadapt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QUADADAPT_ERROR(Name)            \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  };

// se3
QUADADAPT_ERROR(NotSkewSymmetric)
QUADADAPT_ERROR(GimbalLock)
QUADADAPT_ERROR(DegenerateMatrix)
// aero
QUADADAPT_ERROR(RotorStopped)
// neural
QUADADAPT_ERROR(DimensionMismatch)
// controller
QUADADAPT_ERROR(DegenerateThrust)
QUADADAPT_ERROR(HeadingDegenerate)
// stability
QUADADAPT_ERROR(DegenerateNu)
// harness
QUADADAPT_ERROR(ValidationError)
QUADADAPT_ERROR(IOError)
QUADADAPT_ERROR(NonFiniteState)

#undef QUADADAPT_ERROR

/// Newton/bisection failure; carries the last residual.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Config syntax or schema error, with the offending line and key.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, std::string key)
      : Error(what), line_(line), key_(std::move(key)) {}
  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  int line_;
  std::string key_;
};

}  // namespace quadadapt
