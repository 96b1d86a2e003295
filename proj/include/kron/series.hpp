#pragma once

#include <string>
#include <vector>

#include "kron/precision.hpp"

namespace kron {

// Trigonometric kernel of one series term.  Angle conventions:
//   sin, cos      : K(2*pi*(freq . x) + phase)
//   abs_sin,sin_sq: K(pi*(freq . x) + phase)   (both are pi-periodic kernels)
enum class TermKind { sin, cos, abs_sin, sin_sq };

struct TrigTerm {
  Real coeff;
  std::vector<long long> freq;  // integer frequency vector, one entry per dim
  Real phase = 0;               // radians
  TermKind kind = TermKind::sin;
};

// Finite trigonometric series plus a certified sup-norm bound on whatever
// ideal remainder the builder chose not to realize (0 for exact objects).
struct TrigSeriesFunction {
  std::vector<TrigTerm> terms;
  int dim = 1;
  Real tail_sup = 0;
  std::string label;  // free-form description for traces and sidecars
};

struct SeriesValue {
  Real value;
  Real tail;  // certified bound on |true value - value|
};

// Evaluates the stored terms at x (componentwise mod 1 via the integer
// frequencies).  Throws TailDiverges if tail_sup > ctx.tol, DomainError on a
// dimension mismatch.
SeriesValue eval_series(const TrigSeriesFunction& f, const std::vector<Real>& x,
                        const PrecisionContext& ctx);

// Quadrature estimate of the mean of f over the unit cube, via the 1-D
// distribution of (freq . x) mod 1 per term (abs_sin integrands are split at
// their interior kink).  Constant terms contribute K(phase) directly.
Real series_mean_check(const TrigSeriesFunction& f, const PrecisionContext& ctx);

// Exact mean of f over the unit cube (constant terms contribute K(phase),
// nonconstant sin/cos contribute 0, abs_sin 2/pi, sin_sq 1/2, per coeff).
Real analytic_mean(const TrigSeriesFunction& f, const PrecisionContext& ctx);

// Sup-norm bound: sum of |coeff| plus the tail bound.
Real sup_norm_bound(const TrigSeriesFunction& f, const PrecisionContext& ctx);

// Convenience: the single harmonic coeff * kind(2*pi*freq*x) in one dim.
TrigSeriesFunction single_harmonic(double coeff, long long freq, TermKind kind);

}  // namespace kron
