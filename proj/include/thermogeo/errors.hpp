#pragma once

#include <stdexcept>
#include <string>

namespace thermogeo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument or state outside the model's admissible domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The metric (or a coefficient denominator) is degenerate at the state.
class SingularState : public Error {
 public:
  SingularState(const std::string& what, double det, double x1, double x2)
      : Error(what), det_(det), x1_(x1), x2_(x2) {}
  explicit SingularState(const std::string& what) : Error(what) {}

  double det() const { return det_; }
  double x1() const { return x1_; }
  double x2() const { return x2_; }

 private:
  double det_ = 0.0;
  double x1_ = 0.0;
  double x2_ = 0.0;
};

class UnsupportedModel : public Error {
 public:
  using Error::Error;
};

class NoRoot : public Error {
 public:
  using Error::Error;
};

class NoCriticalPoint : public Error {
 public:
  using Error::Error;
};

class FrameSingular : public Error {
 public:
  using Error::Error;
};

class StepFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace thermogeo
