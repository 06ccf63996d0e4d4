#include "cdc/rational.hpp"

#include <stdexcept>

namespace cdc {

BigInt binom_big(int n, int k) {
  if (n < 0) throw std::invalid_argument("binom_big: negative n");
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

std::string to_fraction_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse_rational: empty string");
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const BigInt num(text.substr(0, slash));
    const BigInt den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
    return Rational(num, den);
  }
  const auto dot = text.find('.');
  if (dot != std::string::npos) {
    const std::string frac = text.substr(dot + 1);
    for (char c : frac)
      if (c < '0' || c > '9')
        throw std::invalid_argument("parse_rational: malformed decimal");
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const std::string whole = text.substr(0, dot);
    const bool neg = !whole.empty() && whole[0] == '-';
    const BigInt head(whole.empty() || whole == "-" ? "0" : whole);
    const BigInt tail = frac.empty() ? BigInt(0) : BigInt(frac);
    BigInt num = head * scale + (neg ? -tail : tail);
    return Rational(num, scale);
  }
  return Rational(BigInt(text), BigInt(1));
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace cdc
