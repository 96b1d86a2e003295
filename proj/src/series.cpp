#include "kron/series.hpp"

#include "kron/quadrature.hpp"

namespace kron {

namespace {

// Reduced kernel argument for one term: (freq . x) mod 1 scaled into the
// kernel's own period, plus the phase.  Reducing before scaling keeps the
// angle O(1) no matter how large the frequencies are.
Real term_angle(const TrigTerm& t, const std::vector<Real>& x) {
  Real dot = 0;
  for (size_t j = 0; j < t.freq.size(); ++j)
    if (t.freq[j] != 0) dot += Real(t.freq[j]) * x[j];
  Real u = frac(dot);
  Real period = (t.kind == TermKind::sin || t.kind == TermKind::cos)
                    ? 2 * pi_value()
                    : pi_value();
  return period * u + t.phase;
}

Real term_value(const TrigTerm& t, const Real& angle) {
  switch (t.kind) {
    case TermKind::sin: return t.coeff * sin(angle);
    case TermKind::cos: return t.coeff * cos(angle);
    case TermKind::abs_sin: return t.coeff * abs(sin(angle));
    case TermKind::sin_sq: {
      Real s = sin(angle);
      return t.coeff * s * s;
    }
  }
  throw DomainError("term_value: unknown kind");
}

}  // namespace

SeriesValue eval_series(const TrigSeriesFunction& f, const std::vector<Real>& x,
                        const PrecisionContext& ctx) {
  ctx.validate();
  if (static_cast<int>(x.size()) != f.dim)
    throw DomainError("eval_series: x has dimension " + std::to_string(x.size()) +
                      ", series has " + std::to_string(f.dim));
  PrecisionGuard guard(ctx);
  Real tail = Real(f.tail_sup);
  if (tail > Real(ctx.tol))
    throw TailDiverges("eval_series: certified tail " + tail.str(6, std::ios_base::scientific) +
                       " exceeds tol");
  Real v = 0;
  for (const auto& t : f.terms) {
    if (static_cast<int>(t.freq.size()) != f.dim)
      throw DomainError("eval_series: term frequency dimension mismatch");
    v += term_value(t, term_angle(t, x));
  }
  return {v, tail};
}

Real series_mean_check(const TrigSeriesFunction& f, const PrecisionContext& ctx) {
  ctx.validate();
  PrecisionGuard guard(ctx);
  const Real two_pi = 2 * pi_value();
  const Real one_pi = pi_value();
  Real mean = 0;
  for (const auto& t : f.terms) {
    bool zero_freq = true;
    for (long long fj : t.freq) zero_freq = zero_freq && fj == 0;
    if (zero_freq)
      throw DomainError("series_mean_check: constant term present");
    // (freq . x) mod 1 is uniform on [0,1) for a nonzero integer frequency
    // vector, so the term's mean is a 1-D integral over one period.
    const TrigTerm& tt = t;
    auto g = [&](const Real& u) {
      switch (tt.kind) {
        case TermKind::sin: return sin(two_pi * u + tt.phase);
        case TermKind::cos: return cos(two_pi * u + tt.phase);
        case TermKind::abs_sin: return abs(sin(one_pi * u + tt.phase));
        case TermKind::sin_sq: {
          Real s = sin(one_pi * u + tt.phase);
          return s * s;
        }
      }
      throw DomainError("series_mean_check: unknown kind");
    };
    Real scale = abs(t.coeff);
    if (scale < 1) scale = 1;
    Real target = Real(ctx.tol) / (Real(4 * (f.terms.size() + 1)) * scale);
    if (t.kind == TermKind::abs_sin) {
      // |sin| has a kink where the argument crosses a multiple of pi; split
      // there so each piece is smooth.
      Real kink = frac(-tt.phase / one_pi);
      if (kink > 0 && kink < 1) {
        mean += t.coeff * (tanh_sinh(g, Real(0), kink, target / 2).value +
                           tanh_sinh(g, kink, Real(1), target / 2).value);
        continue;
      }
    }
    mean += t.coeff * tanh_sinh(g, Real(0), Real(1), target).value;
  }
  return mean;
}

Real analytic_mean(const TrigSeriesFunction& f, const PrecisionContext& ctx) {
  PrecisionGuard guard(ctx);
  Real mean = 0;
  for (const auto& t : f.terms) {
    bool zero_freq = true;
    for (long long fj : t.freq) zero_freq = zero_freq && fj == 0;
    if (zero_freq) {
      mean += term_value(t, t.phase);
      continue;
    }
    switch (t.kind) {
      case TermKind::sin:
      case TermKind::cos: break;
      case TermKind::abs_sin: mean += t.coeff * 2 / pi_value(); break;
      case TermKind::sin_sq: mean += t.coeff / 2; break;
    }
  }
  return mean;
}

Real sup_norm_bound(const TrigSeriesFunction& f, const PrecisionContext& ctx) {
  PrecisionGuard guard(ctx);
  Real s = Real(f.tail_sup);
  for (const auto& t : f.terms) s += abs(t.coeff);
  return s;
}

TrigSeriesFunction single_harmonic(double coeff, long long freq, TermKind kind) {
  TrigSeriesFunction f;
  f.dim = 1;
  TrigTerm t;
  t.coeff = Real(coeff);
  t.freq = {freq};
  t.kind = kind;
  f.terms.push_back(t);
  f.label = "single_harmonic";
  return f;
}

}  // namespace kron
