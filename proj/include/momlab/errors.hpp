#pragma once

#include <stdexcept>
#include <string>

namespace momlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class DegreeOverflow : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An SDP solve did not reach an optimal status.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

// A numerical precondition (flatness, positive definiteness, conditioning)
// does not hold for the given data.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace momlab
