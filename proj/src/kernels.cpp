#include "cdc/kernels.hpp"

namespace cdc::kernels {

namespace serial {

void xor_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] ^= src[i];
}

void axpy_gf256(const std::uint8_t* row, std::uint8_t* dst,
                const std::uint8_t* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] ^= row[src[i]];
}

}  // namespace serial

void xor_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n >= kParallelGrain)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    dst[i] ^= src[i];
#else
  serial::xor_into(dst, src, n);
#endif
}

void axpy_gf256(const std::uint8_t* row, std::uint8_t* dst,
                const std::uint8_t* src, std::size_t n) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n >= kParallelGrain)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    dst[i] ^= row[src[i]];
#else
  serial::axpy_gf256(row, dst, src, n);
#endif
}

}  // namespace cdc::kernels
