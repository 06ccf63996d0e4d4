#pragma once

#include <cstddef>
#include <cstdint>

// Word-wise coding kernels. The OpenMP variants are the production path; the
// serial ones are the reference implementation kept for tests and benchmarks.
namespace cdc::kernels {

// Buffers below this byte count are not worth a parallel region.
inline constexpr std::size_t kParallelGrain = 1u << 16;

// dst[i] ^= src[i]
void xor_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);

// dst[i] ^= row[src[i]] where row is one 256-entry row of a GF(2^8)
// multiplication table (row[x] = a*x for a fixed coefficient a).
void axpy_gf256(const std::uint8_t* row, std::uint8_t* dst,
                const std::uint8_t* src, std::size_t n);

namespace serial {
void xor_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);
void axpy_gf256(const std::uint8_t* row, std::uint8_t* dst,
                const std::uint8_t* src, std::size_t n);
}  // namespace serial

}  // namespace cdc::kernels
