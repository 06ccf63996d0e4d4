#pragma once

#include <cstdint>
#include <vector>

namespace cdc {

using Bytes = std::vector<std::uint8_t>;

// Copies nbits from src (starting at bit offset src_bit) into dst (starting at
// dst_bit). Bits are packed MSB-first: stream bit i lives in byte i/8 at bit
// position 7-(i%8). Regions must not overlap.
void copy_bits(const std::uint8_t* src, std::uint64_t src_bit,
               std::uint8_t* dst, std::uint64_t dst_bit, std::uint64_t nbits);

// Zeroes every bit at stream position >= bits in the final byte.
void mask_tail(Bytes& bytes, std::uint64_t bits);

// A bit string packed MSB-first into bytes. Invariants: bytes.size() ==
// (bits+7)/8 and all pad bits past `bits` are zero.
struct BitString {
  Bytes bytes;
  std::uint64_t bits = 0;

  static BitString zeros(std::uint64_t nbits);
  static BitString from_bytes(Bytes b);  // whole bytes, bits = 8*size

  bool empty() const { return bits == 0; }
  std::uint64_t byte_size() const { return (bits + 7) / 8; }

  void append(const BitString& other);
  BitString slice(std::uint64_t offset, std::uint64_t nbits) const;
  // Truncates or zero-extends to nbits.
  void resize_bits(std::uint64_t nbits);
  // XORs `other` in at the front. other.bits must be <= bits; this matches
  // XOR of zero-padded equal-length strings.
  void xor_with(const BitString& other);

  bool operator==(const BitString&) const = default;
};

}  // namespace cdc
