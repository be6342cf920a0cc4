#pragma once

#include <stdexcept>
#include <string>

namespace bi {

/// Base class of all errors thrown by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Operand shapes disagree (matrix or block arithmetic).
class DimensionError : public Error {
public:
  using Error::Error;
};

/// Malformed textual input: rational literals, JSON configs.
class ParseError : public Error {
public:
  using Error::Error;
};

/// Invalid argument: empty subset, bad permutation, level out of range.
class ArgumentError : public Error {
public:
  using Error::Error;
};

/// Normalization weights are undefined (some mu <= -1/2).
class GaugeError : public Error {
public:
  using Error::Error;
};

/// Joint diagonalization left a cluster the labels cannot resolve.
class DegeneracyError : public Error {
public:
  using Error::Error;
};

/// Label tuples of two eigenbases cannot be matched one-to-one.
class PairingError : public Error {
public:
  using Error::Error;
};

}  // namespace bi
