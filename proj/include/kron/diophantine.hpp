#pragma once

#include <string>
#include <vector>

#include "kron/precision.hpp"
#include "kron/realvector.hpp"

namespace kron {

// One record of the running minimum of ||alpha . m|| over integer vectors of
// growing height.  m is sign-normalized (first nonzero component positive);
// delta carries the signed residual for that representative.
struct BestApproximation {
  long long nu = 0;               // 1-based record index
  std::vector<long long> m;
  long long height = 0;           // max_j |m_j|
  Real zeta;                      // || alpha . m ||
  Real delta;                     // (alpha . m) - nearest integer, |delta| = zeta
};

struct BestApproxList {
  std::vector<BestApproximation> records;
  long long search_bound = 0;     // minimality certified for heights <= this
  int dim = 1;
  std::string alpha_spec;

  long long depth() const { return static_cast<long long>(records.size()); }
};

// Best-approximation records of a single irrational via continued-fraction
// convergents, verified directly against ||q * alpha|| at working precision.
// Throws DomainError unless alpha is 1-dimensional, PrecisionExhausted when
// the continued fraction can no longer be certified at ctx.bits (including a
// decimal alpha whose expansion terminates before m_max is reached).
BestApproxList cf_best_approximations(const RealVector& alpha, long long m_max,
                                      const PrecisionContext& ctx);

// Same records by plain scan over the integer box 0 < max|m_j| <= m_max,
// heights ascending, ties at equal height broken lexicographically.
// budget_cap = 0 applies the per-dimension defaults (1e7 / 1e5 / 1e3 for
// n = 1 / 2 / 3); a request past the cap throws BudgetExceeded.
BestApproxList enumerate_best_approximations(const RealVector& alpha,
                                             long long m_max,
                                             const PrecisionContext& ctx,
                                             long long budget_cap = 0);

// psi(t) = min ||alpha . m|| over 0 < max|m_j| <= t, read off the records.
// Throws OutOfRange unless records cover t (M_1 <= t <= search_bound).
Real psi(const BestApproxList& ba, long long t);

// Running minimum of r_q = max_j ||q * alpha_j|| over q = 1..q_max.
struct SimultaneousRecord {
  long long nu = 0;
  long long q = 0;
  Real r;
};

struct SimultaneousList {
  std::vector<SimultaneousRecord> records;
  long long q_max = 0;
  int dim = 1;
  std::string alpha_spec;

  long long depth() const { return static_cast<long long>(records.size()); }
};

SimultaneousList simultaneous_best(const RealVector& alpha, long long q_max,
                                   const PrecisionContext& ctx);

// psi*(t): the simultaneous analogue of psi.  Same range contract.
Real psi_star(const SimultaneousList& sa, long long t);

// Finite-sample surrogates for the ordinary/uniform exponents of the linear
// form and the uniform simultaneous exponent.  Records pair zeta_nu with the
// next height M_{nu+1} (the height at which the record is finally beaten);
// omega uses a depth-adaptive burn-in, omega_hat/lambda_hat the fixed
// burn-in nu0 = 2.  Throws InsufficientData below 5 records on either list.
struct ExponentEstimate {
  double omega_est = 0;
  double omega_hat_est = 0;
  double lambda_hat_est = 0;
  long long depth_ba = 0;
  long long depth_sa = 0;
  double slack = 0.10;            // declared finite-sample ordering slack
};

ExponentEstimate estimate_exponents(const BestApproxList& ba,
                                    const SimultaneousList& sa);

// Root G in [1, omega_hat] of x^{n-1} + ... + x + 1 = omega_hat, located by
// bisection to |R(G)| <= 1e-12.  Controls the extremal ratio of the ordinary
// and uniform exponents.  Requires n >= 2 and omega_hat >= n.
Real exponent_ratio_root(int n, const Real& omega_hat);

// g(t) = (t^n - 1)(2 - t)/(t - 1) on (1, 2), evaluated at the canonical
// point t = 2 - 2/(n+1) where it takes the closed form
// g_star = (2/(n-1)) * (2^n (1 - 1/(n+1))^n - 1).  The point is chosen for
// the asymptotics, not exact optimality, so the grid scan may edge past
// g_star; the invariants are g(argmax) = g_star and grid_max >= g_star - 1e-3.
struct GnStar {
  Real g_star;
  Real argmax;    // 2 - 2/(n+1)
  Real grid_max;  // max of g over the offset grid, step 1e-4
};

GnStar g_n_star(int n, const PrecisionContext& ctx);

// Transfer lower bound (1 - 1/omega_hat)/(n - 1) for the simultaneous
// uniform exponent of a badly approximable linear form.
Real jarnik_transfer(int n, const Real& omega_hat);

// min over nu of zeta_nu * M_{nu+1}^n: bounded away from zero exactly for
// badly approximable alpha.  Requires at least 2 records.
Real badly_approximable_margin(const BestApproxList& ba);

}  // namespace kron
