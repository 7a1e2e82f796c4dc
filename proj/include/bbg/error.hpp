#pragma once

#include <stdexcept>
#include <string>

namespace bbg {

// Base of every exception raised by the library. The C API maps each
// subclass onto a bbg_status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Wrong dimensions, out-of-range indices, nonsensical parameters.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A point left the domain an oracle or estimator is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The shrunk/translated constraint set is empty, or a point is outside
// the polytope it must belong to.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Exhaustive routines refuse instances that are too large.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Factorization failures and non-finite values.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Malformed input files or configuration.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace bbg
