#pragma once

#include <string>
#include <vector>

#include "kron/precision.hpp"
#include "kron/series.hpp"

namespace kron {

// Base point and growth constants for the doubling series
// F(t) = sum_k A^k sin(t/2^k).  B = t0 - (4/3) t0^3; h = 2B/(2-A) - 1/(A-1).
// valid <=> 1 + 1/(2B+1) < A < 2, which is equivalent to h > 0.
struct PoincareParams {
  Real A;
  Real t0;
  Real B;
  Real h;
  bool valid = false;
};

// Throws DomainError unless t0 in (0, sqrt(3)/2); A admissibility is reported
// through the valid flag, not an error (an inadmissible A still evaluates).
PoincareParams poincare_params(const Real& t0, const Real& A);

enum class PoincareVariant {
  geometric,    // F1: coefficients A^k
  alternating,  // F2: coefficients (-A)^k
};

// Truncated evaluation with certified tail sum_{k>N} A^k min(1, |t|/2^k).
// Throws TailDiverges if A >= 2 (or no truncation depth reaches ctx.tol).
SeriesValue eval_poincare_series(PoincareVariant v, const Real& A, const Real& t,
                                 const PrecisionContext& ctx);

struct CertRow {
  std::string family;
  Real t;
  Real value;
  Real bound;
  Real margin;  // value - bound, before slack
  bool pass = false;
};

struct CertReport {
  std::vector<CertRow> rows;
  bool all_pass = true;
};

// Checks, at grid_per_octave geometric points in each octave
// (2^n t0, 2^{n+1} t0], with slack 2*ctx.tol:
//   doubling (n = 0..n_max-1):  F1(2t) > A*F1(t) - 1
//   growth   (n = 1..n_max):    F1(t)  > 1/(A-1) + h*A^n
//   base     (n = 0):           F1(t)  > B/(1 - A/2)
// Runs even for inadmissible (A, t0); only valid parameters promise a clean
// report.
CertReport certify_F1_inequalities(const Real& A, const Real& t0, int n_max,
                                   int grid_per_octave,
                                   const PrecisionContext& ctx);

struct F2Seed {
  Real t_seed;
  Real h_seed;
};

// Scans t in (0, 10) in steps of 0.01 for the first point with
// F2(t) > 1/(A-1) + 1e-6 and returns that t with
// h_seed = F2(t) - 1/(A-1) - 1e-6.  Throws SeedInvalid if the scan fails.
F2Seed find_F2_seed(const Real& A, const PrecisionContext& ctx);

struct F2Report {
  CertReport cert;  // families: two_sided (grid), alternating (from the seed)
  Real t_seed;
  Real h_seed;
};

// Verifies |F2(2t) + A*F2(t)| < 1 (the two-sided functional inequality) at
// 5000 grid points t in (0, 50] and, after re-checking the seed inequality
// F2(t_seed) > 1/(A-1) + h_seed (SeedInvalid otherwise), the alternating
// growth (-1)^n F2(2^n t_seed) > 1/(A-1) + h_seed*A^n for n = 0..n_max.
// All comparisons carry slack 2*ctx.tol.
F2Report certify_F2_oscillation(const Real& A, const Real& t_seed,
                                const Real& h_seed, int n_max,
                                const PrecisionContext& ctx);

// (u + v sqrt(D))^n: the integer pair with u_n - v_n sqrt(D) = lambda^n.
struct PellPower {
  int n = 0;  // 1-based
  Int u;
  Int v;
};

// Fundamental solution of u^2 - D v^2 = 1 with minimal v >= 1, plus any
// cached powers.
struct PellSolution {
  long long D = 0;
  Int u;
  Int v;
  std::vector<PellPower> powers;  // powers[i] holds n = i+1
};

// Brute scan v = 1..10^6 for the minimal solution.  Throws NotSquarefree if
// D has a square factor, BudgetExceeded past the scan cap.
PellSolution pell_fundamental(long long D);

// Returns a copy with powers filled to n = N via the exact integer
// recurrence u_{n+1} = u*u_n + D*v*v_n, v_{n+1} = u*v_n + v*u_n; the Pell
// identity u_n^2 - D v_n^2 = 1 is rechecked at every step.  N capped at 64
// (OutOfRange beyond; series evaluators extend internally past the cap as
// their tolerance requires).
PellSolution pell_powers(const PellSolution& sol, int N);

// lambda = u - v*sqrt(D) in (0, 1), rendered at `bits`.
Real pell_lambda(const PellSolution& sol, unsigned bits);

// lambda^n by repeated multiplication of lambda (no cancellation).
Real pell_lambda_pow(const PellSolution& sol, int n, unsigned bits);

// u_n - v_n*sqrt(D), formed with enough guard bits to absorb the
// cancellation (about log2(u_n) of them), then rounded to `bits`.
Real pell_lambda_subtracted(const PellPower& p, long long D, unsigned bits);

// F3(t) = sum_{n>=1} A^n sin(lambda^n t), certified truncation with tail
// sum_{n>N} |A|^n min(1, lambda^n |t|).  Throws TailDiverges unless
// |A|*lambda < 1.
SeriesValue eval_F3(const Real& A, const PellSolution& sol, const Real& t,
                    const PrecisionContext& ctx);

// g(x1, x2) = sum_{n>=1} (A*lambda)^n cos(2*pi*(u_n x1 - v_n x2)), geometric
// tail bound.  Throws TailDiverges unless |A|*lambda < 1.
SeriesValue eval_pell_kernel_g(const Real& A, const PellSolution& sol,
                               const Real& x1, const Real& x2,
                               const PrecisionContext& ctx);

// f(x) = integral_0^1 g(s, s*sqrt(D) + x) ds via the cancellation-stable
// closed form sum_n (A^n/pi) sin(pi lambda^n) cos(pi lambda^n - 2 pi v_n x).
// (The antiderivative-difference route loses the whole mantissa: the bracket
// is O(lambda^n) against an A^n amplification.)
SeriesValue eval_pell_averaged_f(const Real& A, const PellSolution& sol,
                                 const Real& x, const PrecisionContext& ctx);

// The same average by tanh-sinh quadrature of the kernel along the path;
// shares no code with the closed form above.
Real pell_averaged_f_quadrature(const Real& A, const PellSolution& sol,
                                const Real& x, const PrecisionContext& ctx);

struct IdentityRow {
  long long t = 0;
  Real lhs;       // sum_{k<t} f(k*sqrt(D))
  Real rhs;       // F3(2*pi*t) / (2*pi)
  Real residual;  // |lhs - rhs|
  Real bound;     // (t+1) * 10 * ctx.tol
  bool pass = false;
};

struct IdentityReport {
  std::vector<IdentityRow> rows;
  Real max_residual;
  bool all_pass = true;
};

// Checks the orbit identity sum_{k<t} f(k sqrt(D)) = F3(2 pi t)/(2 pi) for
// t = 0..t_max, both sides evaluated independently (the left along the orbit
// at extended precision, the right by the F3 series).
IdentityReport certify_discrete_identity(const Real& A, const PellSolution& sol,
                                         long long t_max,
                                         const PrecisionContext& ctx);

}  // namespace kron
