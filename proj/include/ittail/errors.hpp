#pragma once

#include <stdexcept>
#include <string>

namespace ittail {

/// Base class for every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested moment E X^k diverges for the given distribution.
class InfiniteMoment : public Error {
 public:
  using Error::Error;
};

/// Root isolation could not separate candidate roots at working precision.
class ResidualUncertainty : public Error {
 public:
  using Error::Error;
};

/// Every sample of a scanned function fell inside the deadband.
class IndeterminateFunction : public Error {
 public:
  using Error::Error;
};

/// An iterated tail underflowed before the requested abscissa.
class TailUnderflow : public Error {
 public:
  using Error::Error;
};

class UnknownCase : public Error {
 public:
  using Error::Error;
};

/// Malformed distribution or exponential-polynomial literal.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace ittail
