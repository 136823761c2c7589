#pragma once

#include <stdexcept>
#include <string>

namespace bvgodunov {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (e.g. a negative level alpha).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A root bracket could not be established within the expansion limit.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// The influence cone of the datum reaches the edge of the computational domain.
class SupportError : public Error {
 public:
  using Error::Error;
};

/// The time step ratio violates lambda * L <= 1.
class CflError : public Error {
 public:
  using Error::Error;
};

/// Two snapshots or runs that must share a grid do not.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

/// Fine and coarse grids are not nested.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration, flux description, or trace file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace bvgodunov
