#pragma once

#include <stdexcept>
#include <string>

namespace lpdisc {

/// Base of every error raised by the library and the runner.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A split would leave the training or the test set empty.
class TooFewEdges : public Error {
 public:
  using Error::Error;
};

/// A metric needs at least one positive and one negative candidate.
class DegenerateClasses : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class UnknownMetric : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or input file; the message carries line/key context.
class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lpdisc
