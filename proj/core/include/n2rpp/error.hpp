#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace n2rpp {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor shapes disagree with what an operation or layer expects.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error(what) {}
  ShapeError(std::size_t layer, const std::string& what)
      : Error("layer " + std::to_string(layer) + ": " + what), layer_(layer), has_layer_(true) {}

  bool has_layer() const { return has_layer_; }
  std::size_t layer() const { return layer_; }

 private:
  std::size_t layer_ = 0;
  bool has_layer_ = false;
};

// A NaN/Inf showed up where finite values are required.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Malformed or unreadable on-disk data.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace n2rpp
