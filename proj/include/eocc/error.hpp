#pragma once

#include <stdexcept>
#include <string>

namespace eocc {

/// Malformed, missing or incompatible input data (parse failures, variant mismatches).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Numerically degenerate situation, e.g. an edgeless graph or a dataset without structure.
class DegenerateError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Precondition violations (k out of range, bad percentile, ...) throw std::invalid_argument.

}  // namespace eocc
