#pragma once

#include <stdexcept>
#include <string>

namespace celliptic {

/// Malformed input file or command-line value.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a documented invariant (dimension mismatch,
/// non-homogeneous operator, region outside the grid, ...).
class InvariantError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a trustworthy result
/// (singular Gram matrix, grid too coarse for the requested stencil).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace celliptic
