#pragma once

#include <stdexcept>
#include <string>

namespace qcoh {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched dimensions, bad qubit indices, non-square input.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An input violates a stated invariant (Hermiticity, trace, positivity,
// unitarity). Carries the name of the invariant and the size of the violation.
class ValidationError : public Error {
 public:
  ValidationError(std::string invariant, double magnitude, const std::string& what)
      : Error(what), invariant_(std::move(invariant)), magnitude_(magnitude) {}

  const std::string& invariant() const noexcept { return invariant_; }
  double magnitude() const noexcept { return magnitude_; }

 private:
  std::string invariant_;
  double magnitude_;
};

// A formula is evaluated outside its domain of validity.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Two independent numerical routes disagree beyond tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qcoh
