#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace cdc {

// A binary extension field GF(2^m) defined by a reduction polynomial. The
// polynomial is given with its degree-m bit set, e.g. x^3+x+1 -> 0b1011.
struct FieldSpec {
  int m = 8;
  std::uint64_t reduction_poly = 0x11B;  // x^8 + x^4 + x^3 + x + 1

  static FieldSpec gf256() { return FieldSpec{8, 0x11B}; }
  bool operator==(const FieldSpec&) const = default;
};

// Arithmetic in GF(2^m). For m <= 16 the constructor verifies the polynomial
// is irreducible and builds log/antilog tables (plus a full 256x256 product
// table for m == 8, used by the byte kernels). Larger m falls back to
// shift-and-reduce multiplication throughout.
class GaloisField {
 public:
  explicit GaloisField(FieldSpec spec);

  const FieldSpec& spec() const { return spec_; }
  std::uint32_t order() const { return order_; }  // 2^m

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return a ^ b; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t inv(std::uint32_t a) const;  // throws on 0
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;

  // Always-available reference multiply (no tables); used as test oracle.
  std::uint32_t mul_shift_reduce(std::uint32_t a, std::uint32_t b) const;

  // m == 8 only: the 256-entry row {a*0, a*1, ..., a*255} for use in kernels.
  const std::uint8_t* mul_row256(std::uint8_t a) const;

 private:
  void check_element(std::uint32_t a) const;

  FieldSpec spec_;
  std::uint32_t order_ = 0;
  std::vector<std::uint32_t> log_;   // log_[a] for a in [1, order)
  std::vector<std::uint32_t> exp_;   // doubled antilog table
  std::vector<std::uint8_t> table_;  // 256*256 products, m == 8 only
};

// Checked element-with-field wrapper; mixing fields is an error.
struct FieldElement {
  std::uint32_t value = 0;
  const GaloisField* field = nullptr;
};

FieldElement gf_add(FieldElement a, FieldElement b);
FieldElement gf_mul(FieldElement a, FieldElement b);
FieldElement gf_inv(FieldElement a);

// Inverse of the n x n matrix with entry (i, j) = alphas[j]^i, row-major.
// Throws std::invalid_argument("singular Vandermonde") on duplicate alphas.
std::vector<std::uint32_t> vandermonde_inverse(const GaloisField& f,
                                               std::span<const std::uint32_t> alphas,
                                               std::size_t n);

// Solves sum_j alphas[j]^i * u[j] = rhs[i][w] for every word position w.
// rhs holds n equally sized word vectors; returns the n solution vectors.
std::vector<std::vector<std::uint32_t>> vandermonde_solve(
    const GaloisField& f, std::span<const std::uint32_t> alphas, std::size_t n,
    const std::vector<std::vector<std::uint32_t>>& rhs);

}  // namespace cdc
