#pragma once

#include <string>
#include <vector>

#include "kron/precision.hpp"

namespace kron {

// One coordinate of a target vector alpha.  Either an exact quadratic surd
// (a + b*sqrt(D))/c, re-renderable at any precision, or a decimal literal
// (an exact rational; irrationality is the caller's assertion).
struct AlphaComponent {
  enum class Kind { surd, decimal };

  Kind kind = Kind::surd;
  long long a = 0, b = 1, c = 1;  // surd: (a + b*sqrt(D)) / c
  long long D = 2;
  std::string digits;             // decimal: literal as given

  Real render(unsigned bits) const;
  bool is_exact_irrational() const { return kind == Kind::surd; }
};

// Target vector for the linear form alpha . m.  Components carry their own
// exact descriptions so the same vector can be re-rendered at any working
// precision without drift.
struct RealVector {
  std::vector<AlphaComponent> comps;
  std::string spec_string;        // the grammar string this was parsed from

  int dim() const { return static_cast<int>(comps.size()); }
  std::vector<Real> render(unsigned bits) const;
};

// Grammar: comma-separated components, each one of
//   sqrt<D>            e.g. sqrt2, sqrt3
//   golden             (1 + sqrt(5)) / 2
//   (a+b*sqrt(D))/c    integers a, b, c != 0, D > 0 non-square
//   dec:<digits>       e.g. dec:0.7548776662
// Throws UsageError on malformed input, DomainError on a square D.
RealVector parse_alpha(const std::string& spec);

// Convenience for the common one-component cases.
RealVector alpha_sqrt(long long D);
RealVector alpha_golden();

}  // namespace kron
