#ifndef SUBLIMIT_ERROR_HPP
#define SUBLIMIT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace sublimit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live on different grids or have inconsistent lengths.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace sublimit

#endif  // SUBLIMIT_ERROR_HPP
