#pragma once

#include <stdexcept>
#include <string>

namespace partzdd {

// Malformed input files, invalid plans, violated preconditions on data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a configured memory cap is hit while building a diagram.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::size_t level, std::size_t level_width)
      : std::runtime_error(what), level_(level), level_width_(level_width) {}

  std::size_t level() const noexcept { return level_; }
  std::size_t level_width() const noexcept { return level_width_; }

 private:
  std::size_t level_;
  std::size_t level_width_;
};

}  // namespace partzdd
