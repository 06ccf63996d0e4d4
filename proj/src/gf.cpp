#include "cdc/gf.hpp"

#include <stdexcept>
#include <string>

namespace cdc {

namespace {

int poly_degree(std::uint64_t p) {
  int d = -1;
  for (int i = 0; i < 64; ++i)
    if ((p >> i) & 1) d = i;
  return d;
}

// Remainder of polynomial division over GF(2).
std::uint64_t poly_mod(std::uint64_t a, std::uint64_t b) {
  const int db = poly_degree(b);
  for (int d = poly_degree(a); d >= db; d = poly_degree(a))
    a ^= b << (d - db);
  return a;
}

// Trial division by every polynomial of degree 1..m/2. Fine for m <= 16.
bool is_irreducible(std::uint64_t poly, int m) {
  for (int d = 1; 2 * d <= m; ++d) {
    for (std::uint64_t q = (1ull << d); q < (2ull << d); ++q) {
      if (poly_mod(poly, q) == 0) return false;
    }
  }
  return true;
}

}  // namespace

GaloisField::GaloisField(FieldSpec spec) : spec_(spec) {
  if (spec_.m < 1 || spec_.m > 32)
    throw std::invalid_argument("FieldSpec: m must be in [1, 32]");
  if (poly_degree(spec_.reduction_poly) != spec_.m)
    throw std::invalid_argument("FieldSpec: reduction polynomial degree != m");
  order_ = (spec_.m == 32) ? 0 : (1u << spec_.m);  // order_ == 0 encodes 2^32

  if (spec_.m <= 16) {
    if (!is_irreducible(spec_.reduction_poly, spec_.m))
      throw std::invalid_argument("FieldSpec: reduction polynomial is reducible");
    const std::uint32_t n = order_ - 1;  // multiplicative group order
    log_.assign(order_, 0);
    exp_.assign(2 * n, 0);
    if (n == 1) {  // GF(2): the group is trivial
      exp_[0] = exp_[1] = 1;
      log_[1] = 0;
      return;
    }
    // Find a generator of the multiplicative group by walking its powers.
    for (std::uint32_t g = 2; g < order_; ++g) {
      std::uint32_t x = 1, steps = 0;
      do {
        x = mul_shift_reduce(x, g);
        ++steps;
      } while (x != 1 && steps <= n);
      if (steps == n) {
        x = 1;
        for (std::uint32_t i = 0; i < n; ++i) {
          exp_[i] = x;
          exp_[i + n] = x;
          log_[x] = i;
          x = mul_shift_reduce(x, g);
        }
        break;
      }
    }
    if (exp_[0] != 1) throw std::runtime_error("GaloisField: no generator found");
    if (spec_.m == 8) {
      table_.assign(256 * 256, 0);
      for (std::uint32_t a = 0; a < 256; ++a)
        for (std::uint32_t b = 0; b < 256; ++b)
          table_[(a << 8) | b] = static_cast<std::uint8_t>(
              (a && b) ? exp_[log_[a] + log_[b]] : 0);
    }
  }
}

void GaloisField::check_element(std::uint32_t a) const {
  if (order_ != 0 && a >= order_)
    throw std::invalid_argument("GaloisField: element out of range");
}

std::uint32_t GaloisField::mul_shift_reduce(std::uint32_t a, std::uint32_t b) const {
  // Carry-less multiply, then reduce from the top.
  std::uint64_t acc = 0, aa = a;
  for (int i = 0; i < 32; ++i)
    if ((b >> i) & 1) acc ^= aa << i;
  for (int d = 62; d >= spec_.m; --d)
    if ((acc >> d) & 1) acc ^= spec_.reduction_poly << (d - spec_.m);
  return static_cast<std::uint32_t>(acc);
}

std::uint32_t GaloisField::mul(std::uint32_t a, std::uint32_t b) const {
  check_element(a);
  check_element(b);
  if (spec_.m == 8) return table_[(a << 8) | b];
  if (spec_.m <= 16) {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  return mul_shift_reduce(a, b);
}

std::uint32_t GaloisField::inv(std::uint32_t a) const {
  check_element(a);
  if (a == 0) throw std::invalid_argument("GaloisField: zero has no inverse");
  if (spec_.m <= 16) {
    const std::uint32_t n = order_ - 1;
    return exp_[(n - log_[a]) % n];
  }
  // a^(2^m - 2) by square and multiply.
  const std::uint64_t e = (spec_.m == 32) ? 0xFFFFFFFEull : (std::uint64_t)order_ - 2;
  return pow(a, e);
}

std::uint32_t GaloisField::pow(std::uint32_t a, std::uint64_t e) const {
  check_element(a);
  std::uint32_t result = 1, base = a;
  while (e != 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

const std::uint8_t* GaloisField::mul_row256(std::uint8_t a) const {
  if (spec_.m != 8)
    throw std::logic_error("mul_row256 is only available for m == 8");
  return table_.data() + (static_cast<std::size_t>(a) << 8);
}

namespace {
const GaloisField* common_field(FieldElement a, FieldElement b) {
  if (a.field == nullptr || b.field == nullptr)
    throw std::invalid_argument("FieldElement: missing field");
  if (a.field != b.field && !(a.field->spec() == b.field->spec()))
    throw std::invalid_argument("FieldElement: mismatched field specs");
  return a.field;
}
}  // namespace

FieldElement gf_add(FieldElement a, FieldElement b) {
  const GaloisField* f = common_field(a, b);
  return {f->add(a.value, b.value), f};
}

FieldElement gf_mul(FieldElement a, FieldElement b) {
  const GaloisField* f = common_field(a, b);
  return {f->mul(a.value, b.value), f};
}

FieldElement gf_inv(FieldElement a) {
  if (a.field == nullptr) throw std::invalid_argument("FieldElement: missing field");
  return {a.field->inv(a.value), a.field};
}

std::vector<std::uint32_t> vandermonde_inverse(const GaloisField& f,
                                               std::span<const std::uint32_t> alphas,
                                               std::size_t n) {
  if (n == 0 || n > alphas.size())
    throw std::invalid_argument("vandermonde_inverse: need n alphas");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (alphas[i] == alphas[j])
        throw std::invalid_argument("singular Vandermonde");

  // Gauss-Jordan on [A | I].
  std::vector<std::uint32_t> a(n * n), inv(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    inv[i * n + i] = 1;
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = f.pow(alphas[j], i);
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot * n + col] == 0) ++pivot;
    if (pivot == n) throw std::invalid_argument("singular Vandermonde");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a[pivot * n + j], a[col * n + j]);
        std::swap(inv[pivot * n + j], inv[col * n + j]);
      }
    }
    const std::uint32_t pinv = f.inv(a[col * n + col]);
    for (std::size_t j = 0; j < n; ++j) {
      a[col * n + j] = f.mul(a[col * n + j], pinv);
      inv[col * n + j] = f.mul(inv[col * n + j], pinv);
    }
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col) continue;
      const std::uint32_t factor = a[row * n + col];
      if (factor == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a[row * n + j] ^= f.mul(factor, a[col * n + j]);
        inv[row * n + j] ^= f.mul(factor, inv[col * n + j]);
      }
    }
  }
  return inv;
}

std::vector<std::vector<std::uint32_t>> vandermonde_solve(
    const GaloisField& f, std::span<const std::uint32_t> alphas, std::size_t n,
    const std::vector<std::vector<std::uint32_t>>& rhs) {
  if (rhs.size() != n)
    throw std::invalid_argument("vandermonde_solve: need n right-hand sides");
  const std::size_t words = rhs.empty() ? 0 : rhs[0].size();
  for (const auto& v : rhs)
    if (v.size() != words)
      throw std::invalid_argument("vandermonde_solve: ragged right-hand sides");

  const std::vector<std::uint32_t> inv = vandermonde_inverse(f, alphas, n);
  std::vector<std::vector<std::uint32_t>> out(n, std::vector<std::uint32_t>(words, 0));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t c = inv[j * n + i];
      if (c == 0) continue;
      for (std::size_t w = 0; w < words; ++w)
        out[j][w] ^= f.mul(c, rhs[i][w]);
    }
  return out;
}

}  // namespace cdc
