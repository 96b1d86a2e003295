#pragma once

#include <string>
#include <vector>

#include "kron/diophantine.hpp"
#include "kron/realvector.hpp"
#include "kron/series.hpp"

namespace kron {

// Decreasing-to-zero envelope sigma_t used to calibrate the layered
// construction.  validate() samples t up to 10^6 and rejects envelopes that
// are nonpositive, nondecreasing, or visibly not tending to zero.
struct SigmaSequence {
  enum class Form { power, log_inv, table };
  Form form = Form::power;
  double p = 0.25;            // power: sigma_t = (t+2)^{-p}
  std::vector<double> table;  // table: sigma_t = table[min(t, size-1)]

  Real value(long long t) const;  // at the current working precision
  void validate() const;
  std::string describe() const;
};

SigmaSequence sigma_power(double p);
SigmaSequence sigma_log_inv();

struct KocherginLevel {
  int k = 0;         // layer index (weight 2^{-k})
  long long nu = 0;  // chosen best-approximation record
  long long r = 0;   // floor(1 / (2 zeta_nu))
};

// Layered function f = sum_j 2^{-j} f_{nu_j} with f_nu(x) =
// (|sin(pi(m_nu.x + delta_nu))| - |sin(pi m_nu.x)|) / zeta_nu, truncated at
// k_max layers.  Levels are picked greedily: the smallest record index
// (strictly increasing) whose r = floor(1/(2 zeta)) exceeds the previous
// level's and satisfies sigma_r <= 2^{-k}.
struct KocherginConstruction {
  RealVector alpha;
  BestApproxList ba;
  SigmaSequence sigma;
  std::vector<KocherginLevel> chosen;
  int k_max = 0;
  long long t0 = 0;  // r_1: the certified growth range starts here
};

// Throws EmptyConstruction for k_max < 1, DepthExceeded (naming the missing
// depth) when ba runs out of records before k_max levels are placed.
KocherginConstruction build_kochergin(const RealVector& alpha,
                                      const BestApproxList& ba,
                                      const SigmaSequence& sigma, int k_max,
                                      const PrecisionContext& ctx);

// S_f^t(alpha) collapsed by telescoping: F(t alpha) =
// sum_j 2^{-j} |sin(pi t delta_{nu_j})| / zeta_{nu_j}.  The tail carries the
// honest bound pi * t * 2^{-k_max} for the layers the truncation dropped.
SeriesValue kochergin_sum(const KocherginConstruction& c, long long t,
                          const PrecisionContext& ctx);

// f(x) directly (off-orbit allowed); tail bound pi * 2^{-k_max}.
SeriesValue kochergin_f_eval(const KocherginConstruction& c,
                             const std::vector<Real>& x,
                             const PrecisionContext& ctx);

// The same f as a term list (two abs_sin terms per layer), for the generic
// Birkhoff-sum engine and the telescoping cross-check.
TrigSeriesFunction kochergin_f_series(const KocherginConstruction& c,
                                      const PrecisionContext& ctx);

struct GrowthRow {
  long long t = 0;
  Real value;       // certified truncated S_f^t
  Real tail;        // dropped-layer bound
  Real sigma_t;
  Real bound_weak;  // t * sigma_t
  Real bound_two;   // 2 * t * sigma_t
  bool pass_weak = false;  // value >= t sigma_t - slack (certified)
  bool pass_two = false;   // value + tail >= 2 t sigma_t - slack (necessary)
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  bool all_pass_weak = true;
  bool all_pass_two = true;
};

// Sweeps integer t in [t_from, t_to], which must lie inside the guaranteed
// window [t0, r_{k_max}] (RangeError otherwise).  The weak bound t sigma_t is
// certified from the truncated value alone; the factor-2 bound of the layer
// chain is checked as a necessary condition with the tail added.
GrowthReport certify_growth(const KocherginConstruction& c, long long t_from,
                            long long t_to, const PrecisionContext& ctx);

// Smooth analogue: f(x) = sum_nu M_nu^{-d} sin(pi zeta_nu)/zeta_nu *
// sin(2 pi m~_nu.x + pi zeta_nu) with m~ = sign(delta) m, so that the
// telescoped orbit sum is sum_nu M_nu^{-d} sin^2(pi t delta_nu)/zeta_nu.
struct SmoothConstruction {
  RealVector alpha;
  BestApproxList ba;
  Real d;
  int n_terms = 0;
  TrigSeriesFunction series;
  double margin = 0;  // 2*omega_hat_est - omega_est - d, from finite samples
};

// Throws InsufficientDepth when ba has fewer than n_terms records,
// DomainError for d < 1.
SmoothConstruction build_smooth(const RealVector& alpha,
                                const BestApproxList& ba, const Real& d,
                                int n_terms, const PrecisionContext& ctx);

// Telescoped S_f^t: value over the n_terms realized layers; tail over deeper
// layers bounded by min(1, (pi t zeta)^2)/(zeta M^d) on the remaining
// records plus a geometric closure past the list's depth.
SeriesValue smooth_orbit_sum(const SmoothConstruction& s, long long t,
                             const PrecisionContext& ctx);

struct SmoothWindowRow {
  long long nu = 0;        // active layer: 1/(2 zeta_{nu-1}) <= t < 1/(2 zeta_nu)
  long long t_first = 0;   // first integer t of the window (clipped to >= 1)
  long long t_last = 0;    // last integer t of the window (clipped to t_max)
  Real min_value;          // min over the window of (value - tail)
  long long argmin_t = 0;
  Real prediction;         // zeta_nu (2 t_left)^2 / M_nu^d at the real left end
  bool pass = false;       // min_value >= prediction * 0.99
};

struct SmoothGrowthReport {
  std::vector<SmoothWindowRow> rows;
  Real min_over_range;  // min of (value - tail) over all t in [1, t_max]
  bool all_pass = true;
};

// Splits [1, t_max] into the dyadic windows of the layer chain and checks the
// quadratic lower bound at each window against the sweep minimum.
SmoothGrowthReport certify_smooth_growth(const SmoothConstruction& s,
                                         long long t_max,
                                         const PrecisionContext& ctx);

}  // namespace kron
