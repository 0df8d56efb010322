#pragma once

#include <stdexcept>

namespace hardy {

// Base for domain failures. Bad caller input is reported with
// std::invalid_argument instead.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
  public:
    using Error::Error;
};

class MeterKindError : public Error {
  public:
    using Error::Error;
};

// Raised when the requested post-selection outcome has probability below
// the post-selection floor; no conditional state exists.
class PostselectionError : public Error {
  public:
    using Error::Error;
};

// A numerical invariant (norm, unitarity, reality of a moment) did not hold.
class InvariantError : public Error {
  public:
    using Error::Error;
};

// Statistical failure: nothing accepted, or a signal too small to resolve.
class StatisticsError : public Error {
  public:
    using Error::Error;
};

}  // namespace hardy
