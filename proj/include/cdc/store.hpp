#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cdc {

// Per-node storage for intermediate values, indexed (node, function, file),
// all 1-based. Every value is exactly value_bits wide, padded with zero bits
// to whole bytes. Backed by one flat arena per node so parallel writers to
// distinct slots never contend.
class IntermediateStore {
 public:
  enum class Provenance : std::uint8_t { kAbsent = 0, kMapped = 1, kDecoded = 2 };

  IntermediateStore(int node_count, int function_count, std::int64_t file_count,
                    std::int64_t value_bits);

  int node_count() const { return node_count_; }
  int function_count() const { return function_count_; }
  std::int64_t file_count() const { return file_count_; }
  std::int64_t value_bits() const { return value_bits_; }
  std::int64_t value_bytes() const { return value_bytes_; }

  bool has(int node, int function, std::int64_t file) const;
  Provenance provenance(int node, int function, std::int64_t file) const;
  // Throws when the value is absent.
  std::span<const std::uint8_t> value(int node, int function, std::int64_t file) const;
  // Copies `bytes` (must be value_bytes long, tail bits zero) into the slot.
  void put(int node, int function, std::int64_t file,
           std::span<const std::uint8_t> bytes, Provenance provenance);

  // Values a node holds / how many arrived by decoding, for invariant checks.
  std::int64_t count(int node, Provenance p) const;

 private:
  std::size_t slot(int node, int function, std::int64_t file) const;

  int node_count_;
  int function_count_;
  std::int64_t file_count_;
  std::int64_t value_bits_;
  std::int64_t value_bytes_;
  std::vector<std::uint8_t> arena_;
  std::vector<std::uint8_t> state_;
};

}  // namespace cdc
