#include "kron/precision.hpp"

#include <map>

namespace kron {

unsigned digits10_for_bits(unsigned bits) {
  // ceil(bits * log10(2)) plus one spare digit; mpfr rounds the digit count
  // back up to a mantissa of at least `bits`.
  return static_cast<unsigned>((static_cast<unsigned long long>(bits) * 301 + 999) / 1000) + 1;
}

PrecisionGuard::PrecisionGuard(unsigned bits) {
  if (bits < 64) throw DomainError("PrecisionGuard: bits must be >= 64");
  saved_digits10_ = static_cast<unsigned>(Real::default_precision());
  Real::default_precision(digits10_for_bits(bits));
}

PrecisionGuard::~PrecisionGuard() { Real::default_precision(saved_digits10_); }

unsigned precision_bits(const Real& x) {
  return static_cast<unsigned>(mpfr_get_prec(x.backend().data()));
}

Real round_to_bits(const Real& x, unsigned bits) {
  // Assignment between variable-precision numbers adopts the source's
  // mantissa width, so narrowing has to go through mpfr directly.
  Real out;
  mpfr_set_prec(out.backend().data(), static_cast<mpfr_prec_t>(bits));
  mpfr_set(out.backend().data(), x.backend().data(), MPFR_RNDN);
  return out;
}

Real pi_value() {
  // Cached per working precision; mpfr atan is correctly rounded, so the
  // cache entry is deterministic.
  static std::map<unsigned, Real> cache;
  const unsigned d = static_cast<unsigned>(Real::default_precision());
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  Real p = 4 * atan(Real(1));
  cache.emplace(d, p);
  return p;
}

Real eps_for_bits(unsigned bits) {
  return ldexp(Real(1), -static_cast<int>(bits) + 1);
}

Real frac(const Real& x) {
  Real f = x - floor(x);
  // floor rounding can leave f == 1 when x is a hair below an integer.
  if (f >= 1) f -= 1;
  if (f < 0) f += 1;
  return f;
}

Real nearest_int_norm(const Real& x) {
  Real f = frac(x);
  Real g = 1 - f;
  return f <= g ? f : g;
}

Real signed_nearest_delta(const Real& x) {
  Real f = frac(x);
  if (f > Real(1) / 2) return f - 1;
  return f;
}

Real frac_int_mul(const Int& c, const Real& x, unsigned bits) {
  if (c == 0) return Real(0);
  // Carry out the product and reduction with the multiplicand's full width
  // as guard bits, so the only error left is c * ulp(x).
  const unsigned cbits = static_cast<unsigned>(msb(abs(c))) + 1;
  const unsigned xbits = static_cast<unsigned>(
      mpfr_get_prec(x.backend().data()));
  PrecisionGuard guard(bits + cbits + xbits + 32);
  Real prod = Real(c) * x;
  return round_to_bits(frac(prod), bits + 32);
}

}  // namespace kron
