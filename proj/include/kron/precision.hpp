#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include "kron/errors.hpp"

namespace kron {

namespace mp = boost::multiprecision;

// Arbitrary-precision binary float.  Mantissa size is set per value at
// construction time from the process-wide default; PrecisionGuard scopes
// that default.  Expression templates are off so Real behaves like a plain
// value type in auto/lambda contexts.
using Real = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;

// Arbitrary-precision integer (Pell solutions outgrow 64 bits fast).
using Int = mp::mpz_int;

// Working precision plus the absolute tolerance certified tails are checked
// against.  tol is on the same scale as function values.
struct PrecisionContext {
  unsigned bits = 256;
  double tol = 1e-30;

  void validate() const {
    if (bits < 64) throw DomainError("PrecisionContext: bits must be >= 64");
    if (!(tol > 0)) throw DomainError("PrecisionContext: tol must be positive");
  }
};

// Smallest decimal digit count whose mpfr mantissa is at least `bits` wide.
unsigned digits10_for_bits(unsigned bits);

// Scope guard: sets the default construction precision (in bits), restores
// the previous default on exit.  Operations open one of these on entry so
// every temporary inside is built at ctx.bits.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned bits);
  explicit PrecisionGuard(const PrecisionContext& ctx) : PrecisionGuard(ctx.bits) {}
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_digits10_;
};

// Mantissa width of one value.  Operations derive internal guards from this
// when they have no PrecisionContext parameter.
unsigned precision_bits(const Real& x);

// x rounded to a `bits`-wide mantissa.  (Plain assignment adopts the source
// precision instead of narrowing, hence this helper.)
Real round_to_bits(const Real& x, unsigned bits);

// pi at the current default precision (cached per precision).
Real pi_value();

// 2^(1-bits): one ulp at magnitude 1 for the given mantissa size.
Real eps_for_bits(unsigned bits);

// x - floor(x), in [0, 1).
Real frac(const Real& x);

// Distance from x to the nearest integer, in [0, 1/2].
Real nearest_int_norm(const Real& x);

// x minus its nearest integer, in (-1/2, 1/2].  |result| == nearest_int_norm(x).
Real signed_nearest_delta(const Real& x);

// frac(c * x) where c may be far larger than 2^bits.  The product is formed
// with enough guard bits that the returned fraction is accurate to roughly
// 2^-(bits+32) regardless of the magnitude of c.
Real frac_int_mul(const Int& c, const Real& x, unsigned bits);

}  // namespace kron
