#ifndef THERMO_ERROR_HPP
#define THERMO_ERROR_HPP

#include <stdexcept>
#include <string>

namespace thermo {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad files, violated preconditions, out-of-range parameters.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed (non-convergence, underflow, instability).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// An inequality that must hold mathematically was observed to fail.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace thermo

#endif  // THERMO_ERROR_HPP
