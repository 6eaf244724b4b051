#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace microcosm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition or invariant violated by caller-supplied data.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Evaluation hit a pole; location is the argument (or parameter) of the pole.
class PoleError : public Error {
 public:
  PoleError(const std::string& what, std::complex<double> location)
      : Error(what), location_(location) {}
  std::complex<double> location() const { return location_; }

 private:
  std::complex<double> location_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class DegeneracyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConsistencyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class AccuracyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace microcosm
