#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kron/diophantine.hpp"
#include "kron/precision.hpp"
#include "kron/realvector.hpp"
#include "kron/series.hpp"

namespace kron {

struct SumRow {
  long long t = 0;
  Real s;      // probe-specific statistic (|S_t|, residual, sup over x, ...)
  Real bound;
  bool pass = false;
};

// One inequality probe run.  Rows ordered by increasing t; each probe
// documents what its headline all_pass means (it is not always the
// conjunction of row passes).
struct SumTrace {
  std::vector<SumRow> rows;
  std::string alpha_desc;
  std::string f_desc;
  std::string probe;
  double slack = 0;  // additive slack entering each row's pass
  bool all_pass = true;
};

// Coefficient envelope |f_m| <= C * (max_j |m_j|)^{-gamma}.
struct DecaySpec {
  double C = 1;
  double gamma = 2;
};

// Deterministic finite realization of a DecaySpec: one cosine term (phase 0,
// coefficient exactly the envelope value) for every frequency with
// 0 < max_j|m_j| <= m_cap whose first nonzero coordinate is positive, in
// lexicographic order.
TrigSeriesFunction realize_decay(const DecaySpec& spec, int dim, int m_cap);

// Sum of f over the orbit points x + k*alpha, k = 0..t-1, at working
// precision.  The returned tail is t * (per-eval tail) plus a rounding
// allowance.  Propagates TailDiverges from the per-point evaluations.
SeriesValue birkhoff_sum(const TrigSeriesFunction& f, const RealVector& alpha,
                         const std::vector<Real>& x, long long t,
                         const PrecisionContext& ctx);

// Closed form for the orbit sum of one sin/cos harmonic over k = 0..t-1
// (geometric sum in the unit circle), evaluated at the current working
// precision.  Oracle for birkhoff_sum and workhorse for the grid probes.
Real dirichlet_harmonic_sum(const TrigTerm& term, const Real& alpha,
                            const Real& x, long long t);

// Exact unnormalized discrepancy of the points {k*alpha}, k = 1..t, via the
// sorted-gap formula: with u_1 <= ... <= u_t and u_0 := 0, u_{t+1} := 1,
//   D_t = max_{i=0..t} max(|i - t u_i|, |i - t u_{i+1}|).
// alpha must be one-dimensional.
double discrepancy_1d(const RealVector& alpha, long long t);

// Total variation of a one-dimensional trig series over [0,1]: breakpoints
// at derivative zeros (and kernel kinks), summed as |f(z_{i+1}) - f(z_i)|.
// Relative error about 1e-10, far inside the 1e-6 contract.
double total_variation(const TrigSeriesFunction& f);

// |S_t| <= V[f] * D_t for t = 1..t_max, with S_t = sum_{k=1..t} f(k alpha)
// (the discrepancy-native indexing).  all_pass = every row passes.
SumTrace koksma_probe(const TrigSeriesFunction& f, const RealVector& alpha,
                      long long t_max, const PrecisionContext& ctx);

// Ergodic-average residuals |S_t/t - mean(f)| at the given times
// (ascending).  Rows all carry the threshold as bound; the headline
// all_pass reflects only the largest time, which is the contract.
SumTrace weyl_probe(const TrigSeriesFunction& f, const RealVector& alpha,
                    const std::vector<Real>& x,
                    const std::vector<long long>& t_list,
                    const PrecisionContext& ctx, double threshold = 1e-2);

// max over x_grid uniform points of |S^{q}(x)| at the given denominators
// (ascending).  all_pass = the running minimum drops below its first value
// and the last row is under the threshold.
SumTrace sidorov_probe(const TrigSeriesFunction& f, const RealVector& alpha,
                       const std::vector<long long>& conv_denominators,
                       int x_grid, const PrecisionContext& ctx,
                       double threshold = 0.05);

struct IntegralBoundResult {
  long long t = 0;
  double value = 0;  // quadrature of the boxed integral, stable to 1e-4
  double m_sup = 0;  // max|f| on a dense grid
  double bound = 0;
  bool pass = false;
  long long points_used = 0;
};

// Quadrature of the dilated-orbit integral over a box J of
// S^t(x) = sum_{k=1..t} f(k x), checked against m_sup * n * (1 + ln t).
// box entries are [a_j, b_j] with 0 <= a < b <= 1.
IntegralBoundResult integral_bound_probe(
    const TrigSeriesFunction& f,
    const std::vector<std::pair<double, double>>& box, long long t,
    int quad_points, const PrecisionContext& ctx);

// Same dilated integral over the window [a/q, (a+1)/q], checked against the
// t-uniform bound m_sup * (q - 1).  BadWindow unless
// gcd(a,q) = gcd(a+1,q) = 1 and 0 <= a < q.
IntegralBoundResult rational_window_bound_probe(const TrigSeriesFunction& f,
                                                long long a, long long q,
                                                long long t,
                                                const PrecisionContext& ctx);

struct SpecialTimesReport {
  long long q_cap = 0;     // the search ceiling Q
  long long t_star = 0;    // best simultaneous-approximation time <= Q
  double r_star = 0;       // max_j ||t_star alpha_j||
  double observed = 0;     // sup over the x grid of |S^{t_star}(x)|
  double bound = 0;        // min over nu of Q^{-lambda_hat+delta}/zeta_nu
                           //   + Q * M_{nu+1}^{n-gamma}
  long long nu_opt = 0;    // the minimizing nu
  double lambda_hat = 0;   // finite-sample exponent estimates used
  double omega_hat = 0;
  double delta = 0.05;
  bool warn_gamma = false;  // gamma <= n + omega_hat/lambda_hat
  bool pass = false;        // observed <= 10 * bound
};

// Evaluates the sup of |S^t_f| at the special time t <= Q minimizing
// max_j ||t alpha_j||, against the two-term bound shape with delta = 0.05.
// f must realize spec's envelope term-by-term.  Sup is a uniform x grid
// (x_grid points per dimension) plus one refinement pass around the best
// cell.
SpecialTimesReport special_times_probe(const TrigSeriesFunction& f,
                                       const DecaySpec& spec,
                                       const RealVector& alpha, long long Q,
                                       int x_grid,
                                       const PrecisionContext& ctx);

// Phi(t) = log(t+1)^log_power * (log(log t + 2))^loglog_power.
struct PhiSpec {
  double log_power = 1;
  double loglog_power = 1.1;
};

double phi_value(const PhiSpec& phi, double t);

struct ColzaniRow {
  int index = 0;      // position in the sample list
  double c_emp = 0;   // max_{t <= t_max} sup_{x grid} |S_t| / Phi(t)
  double c_half = 0;  // same statistic at horizon t_max/2
  bool stable = false;  // c_emp <= 1.25 * c_half
};

struct ColzaniReport {
  PhiSpec phi;
  long long t_max = 0;
  int x_grid = 0;
  double integral_1e8 = 0;      // numeric integral of 1/(t Phi) over [2,1e8]
  double tail_block_ratio = 0;  // limiting dyadic-block ratio of the tail
  std::vector<ColzaniRow> rows;
  double unstable_fraction = 0;
  bool all_finite = true;
};

// Deterministic pseudo-random one-dimensional sample points in (0,1),
// reproducible across runs for a fixed seed.
std::vector<RealVector> seeded_alpha_samples(int count, std::uint64_t seed);

// Empirical constants c(f, alpha) against the envelope Phi for each sampled
// alpha.  Throws PhiInadmissible when the numeric tail test finds
// integral dt/(t Phi) divergent.
ColzaniReport colzani_probe(const TrigSeriesFunction& f,
                            const std::vector<RealVector>& alpha_samples,
                            const PhiSpec& phi, long long t_max, int x_grid,
                            const PrecisionContext& ctx);

}  // namespace kron
