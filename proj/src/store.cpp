#include "cdc/store.hpp"

#include <cstring>
#include <stdexcept>
#include <string>

namespace cdc {

IntermediateStore::IntermediateStore(int node_count, int function_count,
                                     std::int64_t file_count, std::int64_t value_bits)
    : node_count_(node_count),
      function_count_(function_count),
      file_count_(file_count),
      value_bits_(value_bits),
      value_bytes_((value_bits + 7) / 8) {
  if (node_count < 1 || function_count < 1 || file_count < 1 || value_bits < 1)
    throw std::invalid_argument("IntermediateStore: all dimensions must be positive");
  const std::size_t slots = static_cast<std::size_t>(node_count) * function_count * file_count;
  arena_.assign(slots * static_cast<std::size_t>(value_bytes_), 0);
  state_.assign(slots, 0);
}

std::size_t IntermediateStore::slot(int node, int function, std::int64_t file) const {
  if (node < 1 || node > node_count_ || function < 1 || function > function_count_ ||
      file < 1 || file > file_count_)
    throw std::out_of_range("IntermediateStore: index out of range");
  return (static_cast<std::size_t>(node - 1) * function_count_ +
          static_cast<std::size_t>(function - 1)) *
             static_cast<std::size_t>(file_count_) +
         static_cast<std::size_t>(file - 1);
}

bool IntermediateStore::has(int node, int function, std::int64_t file) const {
  return state_[slot(node, function, file)] != 0;
}

IntermediateStore::Provenance IntermediateStore::provenance(int node, int function,
                                                            std::int64_t file) const {
  return static_cast<Provenance>(state_[slot(node, function, file)]);
}

std::span<const std::uint8_t> IntermediateStore::value(int node, int function,
                                                       std::int64_t file) const {
  const std::size_t s = slot(node, function, file);
  if (state_[s] == 0)
    throw std::runtime_error("IntermediateStore: value (" + std::to_string(function) +
                             "," + std::to_string(file) + ") absent at node " +
                             std::to_string(node));
  return {arena_.data() + s * static_cast<std::size_t>(value_bytes_),
          static_cast<std::size_t>(value_bytes_)};
}

void IntermediateStore::put(int node, int function, std::int64_t file,
                            std::span<const std::uint8_t> bytes, Provenance provenance) {
  if (static_cast<std::int64_t>(bytes.size()) != value_bytes_)
    throw std::invalid_argument("IntermediateStore: wrong value size");
  const int tail = static_cast<int>(value_bits_ & 7);
  if (tail != 0 && (bytes.back() & static_cast<std::uint8_t>(0xFF >> tail)) != 0)
    throw std::invalid_argument("IntermediateStore: nonzero pad bits");
  const std::size_t s = slot(node, function, file);
  std::memcpy(arena_.data() + s * static_cast<std::size_t>(value_bytes_), bytes.data(),
              bytes.size());
  state_[s] = static_cast<std::uint8_t>(provenance);
}

std::int64_t IntermediateStore::count(int node, Provenance p) const {
  const std::size_t base = static_cast<std::size_t>(node - 1) *
                           static_cast<std::size_t>(function_count_) *
                           static_cast<std::size_t>(file_count_);
  const std::size_t per_node = static_cast<std::size_t>(function_count_) *
                               static_cast<std::size_t>(file_count_);
  if (node < 1 || node > node_count_)
    throw std::out_of_range("IntermediateStore: node out of range");
  std::int64_t c = 0;
  for (std::size_t i = 0; i < per_node; ++i)
    if (state_[base + i] == static_cast<std::uint8_t>(p)) ++c;
  return c;
}

}  // namespace cdc
