#pragma once

#include <stdexcept>
#include <string>

namespace xyzbethe {

// Root of every error raised by the library. Callers that do not care about
// the failure mode can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameters : public Error {
 public:
  using Error::Error;
};

// |q| >= 1: the theta series does not converge.
class NonConvergentNome : public Error {
 public:
  using Error::Error;
};

class TruncationFailure : public Error {
 public:
  TruncationFailure(const std::string& what, double achieved_bound)
      : Error(what), achieved_bound_(achieved_bound) {}
  double achieved_bound() const noexcept { return achieved_bound_; }

 private:
  double achieved_bound_;
};

// A normalising theta value vanished (eta on a degenerate point).
class DegenerateEta : public Error {
 public:
  using Error::Error;
};

class DegenerateGamma : public Error {
 public:
  using Error::Error;
};

class DimensionTooLarge : public Error {
 public:
  using Error::Error;
};

class SingularInverse : public Error {
 public:
  using Error::Error;
};

class QRNonConvergence : public Error {
 public:
  using Error::Error;
};

class DegeneracyUnresolved : public Error {
 public:
  using Error::Error;
};

// A Bethe root sits on (or numerically next to) a zero of a theta / sinh
// factor, so the logarithmic form of the equations is undefined there.
class PoleProximity : public Error {
 public:
  using Error::Error;
};

class FitFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace xyzbethe
