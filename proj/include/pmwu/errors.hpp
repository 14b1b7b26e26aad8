#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pmwu {

/// Malformed input file or serialized instance.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector or operator shapes do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exact oracle was asked for an instance above its enumeration bound.
class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline void check_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(want) + ", got " +
                         std::to_string(got));
  }
}

}  // namespace pmwu
