#pragma once

#include <functional>

#include "kron/precision.hpp"

namespace kron {

struct QuadratureResult {
  Real value;
  Real err_estimate;  // |last refinement increment|
  int level;          // refinement level reached
};

// Tanh-sinh (double exponential) quadrature of f over [a, b] at the current
// working precision.  Refines the step until the increment drops below
// target_abs_err; throws QuadratureUnstable if max_level refinements do not
// get there.  Suited to integrands analytic on the open interval.
QuadratureResult tanh_sinh(const std::function<Real(const Real&)>& f,
                           const Real& a, const Real& b,
                           const Real& target_abs_err, int max_level = 12);

// Composite-Simpson refinement in double precision for desk-scale probe
// integrals.  Halves the panel width until two successive estimates agree
// within target_abs_err; throws QuadratureUnstable past max_level doublings.
double simpson_refine(const std::function<double(double)>& f, double a,
                      double b, double target_abs_err, int start_panels = 64,
                      int max_level = 16);

}  // namespace kron
