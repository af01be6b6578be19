#include "n2rpp/nn/params.hpp"

#include <algorithm>

#include "n2rpp/error.hpp"

namespace n2rpp::nn {

void NetworkParams::add(std::string name, Tensor tensor) {
  for (const auto& e : entries_) {
    if (e.name == name) throw Error("duplicate parameter name '" + name + "'");
  }
  entries_.push_back({std::move(name), std::move(tensor)});
}

std::size_t NetworkParams::scalar_count() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.tensor.size();
  return n;
}

std::size_t NetworkParams::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) return i;
  }
  throw Error("no parameter named '" + std::string(name) + "'");
}

NetworkParams NetworkParams::zeros_like() const {
  NetworkParams z;
  for (const auto& e : entries_) z.entries_.push_back({e.name, Tensor(e.tensor.shape())});
  return z;
}

bool NetworkParams::same_layout(const NetworkParams& other) const {
  if (entries_.size() != other.entries_.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name != other.entries_[i].name ||
        entries_[i].tensor.shape() != other.entries_[i].tensor.shape()) {
      return false;
    }
  }
  return true;
}

bool NetworkParams::all_finite() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const NamedTensor& e) { return e.tensor.all_finite(); });
}

}  // namespace n2rpp::nn
