#include "cdc/bits.hpp"

#include <cstring>
#include <stdexcept>

namespace cdc {

void copy_bits(const std::uint8_t* src, std::uint64_t src_bit,
               std::uint8_t* dst, std::uint64_t dst_bit, std::uint64_t nbits) {
  if (nbits == 0) return;
  // Fast path: both offsets byte aligned.
  if ((src_bit & 7) == 0 && (dst_bit & 7) == 0) {
    const std::uint64_t whole = nbits / 8;
    std::memcpy(dst + dst_bit / 8, src + src_bit / 8, whole);
    const int rem = static_cast<int>(nbits & 7);
    if (rem != 0) {
      const std::uint8_t mask = static_cast<std::uint8_t>(0xFF << (8 - rem));
      std::uint8_t* d = dst + dst_bit / 8 + whole;
      *d = static_cast<std::uint8_t>((*d & ~mask) | (src[src_bit / 8 + whole] & mask));
    }
    return;
  }
  // Slow path, bit by bit. Only hit by deliberately unaligned tests.
  for (std::uint64_t i = 0; i < nbits; ++i) {
    const std::uint64_t sb = src_bit + i;
    const std::uint64_t db = dst_bit + i;
    const int bit = (src[sb >> 3] >> (7 - (sb & 7))) & 1;
    const std::uint8_t m = static_cast<std::uint8_t>(1u << (7 - (db & 7)));
    if (bit != 0)
      dst[db >> 3] |= m;
    else
      dst[db >> 3] &= static_cast<std::uint8_t>(~m);
  }
}

void mask_tail(Bytes& bytes, std::uint64_t bits) {
  const int rem = static_cast<int>(bits & 7);
  if (rem != 0 && !bytes.empty())
    bytes[bits / 8] &= static_cast<std::uint8_t>(0xFF << (8 - rem));
}

BitString BitString::zeros(std::uint64_t nbits) {
  BitString b;
  b.bits = nbits;
  b.bytes.assign((nbits + 7) / 8, 0);
  return b;
}

BitString BitString::from_bytes(Bytes b) {
  BitString r;
  r.bits = 8 * static_cast<std::uint64_t>(b.size());
  r.bytes = std::move(b);
  return r;
}

void BitString::append(const BitString& other) {
  if (other.bits == 0) return;
  const std::uint64_t old_bits = bits;
  bits += other.bits;
  bytes.resize((bits + 7) / 8, 0);
  copy_bits(other.bytes.data(), 0, bytes.data(), old_bits, other.bits);
  mask_tail(bytes, bits);
}

BitString BitString::slice(std::uint64_t offset, std::uint64_t nbits) const {
  if (offset + nbits > bits) throw std::out_of_range("BitString::slice: out of range");
  BitString r = zeros(nbits);
  copy_bits(bytes.data(), offset, r.bytes.data(), 0, nbits);
  mask_tail(r.bytes, nbits);
  return r;
}

void BitString::resize_bits(std::uint64_t nbits) {
  bits = nbits;
  bytes.resize((nbits + 7) / 8, 0);
  mask_tail(bytes, bits);
}

void BitString::xor_with(const BitString& other) {
  if (other.bits > bits)
    throw std::invalid_argument("BitString::xor_with: other is longer");
  for (std::size_t i = 0; i < other.bytes.size(); ++i) bytes[i] ^= other.bytes[i];
  mask_tail(bytes, bits);
}

}  // namespace cdc
