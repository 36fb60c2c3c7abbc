#pragma once

#include <stdexcept>
#include <string>

namespace uevt {

/// Malformed or inconsistent input data (bad CSV rows, non-positive prices,
/// misaligned dates).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A statistical fit that could not be produced (too few points, rank
/// deficiency, non-convergence).
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace uevt
