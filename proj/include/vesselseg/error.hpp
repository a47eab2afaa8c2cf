#pragma once

#include <stdexcept>
#include <string>

namespace vesselseg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates its documented invariant (even kernel length, sigma <= 0, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two rasters that must share a shape do not.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A file was read but its contents are not a valid raster.
class DecodeError : public Error {
 public:
  using Error::Error;
};

/// Metrics are undefined because a denominator is zero.
class DegenerateMetrics : public Error {
 public:
  using Error::Error;
};

/// A dataset directory is incomplete or malformed.
class DatasetError : public Error {
 public:
  using Error::Error;
};

}  // namespace vesselseg
