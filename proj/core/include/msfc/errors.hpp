#pragma once

#include <stdexcept>
#include <string>

namespace msfc {

/// Malformed, inconsistent, or insufficient input data.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// A computation failed numerically (divergence, degenerate scale, ...).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace msfc
