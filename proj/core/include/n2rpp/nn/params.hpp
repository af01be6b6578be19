#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "n2rpp/tensor.hpp"

namespace n2rpp::nn {

struct NamedTensor {
  std::string name;
  Tensor tensor;

  bool operator==(const NamedTensor&) const = default;
};

// Ordered, uniquely named parameter tensors of one network. Gradients use the
// same container with identical names and shapes.
class NetworkParams {
 public:
  static constexpr int kFormatVersion = 1;

  void add(std::string name, Tensor tensor);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t scalar_count() const;

  NamedTensor& operator[](std::size_t i) { return entries_[i]; }
  const NamedTensor& operator[](std::size_t i) const { return entries_[i]; }

  // Throws Error when absent.
  std::size_t index_of(std::string_view name) const;
  Tensor& at(std::string_view name) { return entries_[index_of(name)].tensor; }
  const Tensor& at(std::string_view name) const { return entries_[index_of(name)].tensor; }

  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  // Same names and shapes, all values zero.
  NetworkParams zeros_like() const;
  bool same_layout(const NetworkParams& other) const;
  bool all_finite() const;

  bool operator==(const NetworkParams&) const = default;

 private:
  std::vector<NamedTensor> entries_;
};

}  // namespace n2rpp::nn
