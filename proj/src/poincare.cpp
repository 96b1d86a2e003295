#include "kron/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "kron/quadrature.hpp"

namespace kron {

namespace {

// Smallest N with ratio^{N+1} * scale / (1 - ratio) <= target, ratio in (0,1).
// Planned in double: the result only picks a truncation depth, the tail bound
// itself is recomputed in Real by the caller.
int geometric_depth(double ratio, double scale, double target, int n_min,
                    int n_cap) {
  if (ratio <= 0) return std::max(1, n_min);
  double need = std::log(std::max(scale, 1e-300) / (target * (1.0 - ratio))) /
                std::log(1.0 / ratio);
  int n = static_cast<int>(std::ceil(need));
  n = std::max(n, n_min);
  n = std::max(n, 1);
  if (n > n_cap)
    throw TailDiverges("geometric tail needs " + std::to_string(n) +
                       " terms, cap " + std::to_string(n_cap));
  return n;
}

Real eval_doubling_series(bool alternating, const Real& A, const Real& t,
                          unsigned work_bits, int N) {
  PrecisionGuard guard(work_bits);
  Real acc = 0;
  Real coef = 1;
  Real s = t;  // t / 2^k, exact halving
  const Real step = alternating ? Real(-A) : A;
  for (int k = 0; k <= N; ++k) {
    acc += coef * sin(s);
    coef *= step;
    s /= 2;
  }
  return acc;
}

struct DoublingPlan {
  int N;
  unsigned work_bits;
};

DoublingPlan plan_doubling(const Real& A, const Real& t,
                           const PrecisionContext& ctx) {
  ctx.validate();
  const double a = static_cast<double>(A);
  if (a <= 0) throw DomainError("doubling series: A must be positive");
  if (a >= 2) throw TailDiverges("doubling series: A >= 2");
  const double abs_t = std::abs(static_cast<double>(t));
  // Past k = log2|t| every term is A^k * |t| / 2^k, so the geometric bound
  // with scale max(|t|,1) applies from there on.
  const int n_min = static_cast<int>(std::ceil(std::log2(std::max(abs_t, 1.0)))) + 1;
  const int N = geometric_depth(a / 2, std::max(abs_t, 1.0), ctx.tol / 2,
                                n_min, 500000);
  return {N, ctx.bits + 32};
}

Real doubling_tail(const Real& A, const Real& t, int N) {
  const Real r = A / 2;
  Real scale = abs(t);
  if (scale < 1) scale = 1;
  return scale * pow(r, N + 1) / (1 - r);
}

void push_row(CertReport& rep, const char* family, const Real& t,
              const Real& value, const Real& bound, const Real& slack) {
  CertRow row;
  row.family = family;
  row.t = t;
  row.value = value;
  row.bound = bound;
  row.margin = value - bound;
  row.pass = row.margin > -slack;
  rep.all_pass = rep.all_pass && row.pass;
  rep.rows.push_back(std::move(row));
}

// Extends powers of the fundamental solution to n = N (no cap; exact).
void extend_powers(std::vector<PellPower>& powers, const Int& u, const Int& v,
                   long long D, int N) {
  if (powers.empty()) {
    powers.push_back({1, u, v});
  }
  while (static_cast<int>(powers.size()) < N) {
    const PellPower& p = powers.back();
    PellPower q;
    q.n = p.n + 1;
    q.u = u * p.u + Int(D) * v * p.v;
    q.v = u * p.v + v * p.u;
    if (q.u * q.u - Int(D) * q.v * q.v != 1)
      throw Error("pell power identity failed at n=" + std::to_string(q.n));
    powers.push_back(std::move(q));
  }
}

double lambda_double(const PellSolution& sol) {
  const double u = static_cast<double>(sol.u);
  const double v = static_cast<double>(sol.v);
  return 1.0 / (u + v * std::sqrt(static_cast<double>(sol.D)));
}

// Depth for the Pell series: ratio^{N+1} * scale / (1-ratio) <= tol/2 with
// ratio = |A| * lambda.  Throws TailDiverges when ratio >= 1.
int pell_depth(const Real& A, const PellSolution& sol, double scale,
               const PrecisionContext& ctx) {
  ctx.validate();
  const double ratio = std::abs(static_cast<double>(A)) * lambda_double(sol);
  if (ratio >= 1)
    throw TailDiverges("pell series: |A|*lambda = " + std::to_string(ratio) +
                       " >= 1");
  return geometric_depth(ratio, scale, ctx.tol / 2, 1, 10000);
}

Real pell_ratio(const Real& A, const PellSolution& sol) {
  return abs(A) / (Real(sol.u) + Real(sol.v) * sqrt(Real(sol.D)));
}

}  // namespace

PoincareParams poincare_params(const Real& t0, const Real& A) {
  PrecisionGuard guard(
      std::max({precision_bits(t0), precision_bits(A), 256u}) + 32);
  PoincareParams p;
  p.A = A;
  p.t0 = t0;
  const Real limit = sqrt(Real(3)) / 2;
  if (!(t0 > 0) || !(t0 < limit))
    throw DomainError("poincare_params: t0 must lie in (0, sqrt(3)/2)");
  p.B = t0 - Real(4) / 3 * t0 * t0 * t0;
  // B > 0 on the admissible t0 range, so 2B+1 > 1 and the threshold below is
  // finite.  h > 0 is algebraically equivalent to the A-window condition.
  p.valid = (2 * p.B + 1 > 0) && (1 + 1 / (2 * p.B + 1) < A) && (A < 2);
  if (A != 1 && A != 2) {
    p.h = 2 * p.B / (2 - A) - 1 / (A - 1);
  } else {
    p.h = 0;
    p.valid = false;
  }
  return p;
}

SeriesValue eval_poincare_series(PoincareVariant v, const Real& A, const Real& t,
                                 const PrecisionContext& ctx) {
  const DoublingPlan plan = plan_doubling(A, t, ctx);
  SeriesValue out;
  out.value = eval_doubling_series(v == PoincareVariant::alternating, A, t,
                                   plan.work_bits, plan.N);
  PrecisionGuard guard(plan.work_bits);
  out.tail = doubling_tail(A, t, plan.N);
  return out;
}

CertReport certify_F1_inequalities(const Real& A, const Real& t0, int n_max,
                                   int grid_per_octave,
                                   const PrecisionContext& ctx) {
  const PoincareParams params = poincare_params(t0, A);
  if (n_max < 0) throw DomainError("certify_F1_inequalities: n_max < 0");
  if (grid_per_octave < 1)
    throw DomainError("certify_F1_inequalities: empty grid");
  ctx.validate();

  PrecisionGuard guard(ctx.bits + 32);
  const int G = grid_per_octave;
  std::vector<Real> ratio(G);  // 2^{(i+1)/G}, right-closed octave coverage
  for (int i = 0; i < G; ++i)
    ratio[i] = pow(Real(2), Real(i + 1) / G);

  std::vector<std::vector<Real>> vals(n_max + 1);
  std::vector<std::vector<Real>> ts(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    vals[n].reserve(G);
    ts[n].reserve(G);
    for (int i = 0; i < G; ++i) {
      const Real t = ldexp(t0, n) * ratio[i];
      ts[n].push_back(t);
      vals[n].push_back(
          eval_poincare_series(PoincareVariant::geometric, A, t, ctx).value);
    }
  }

  CertReport rep;
  rep.rows.reserve(static_cast<size_t>(n_max + 1) * G * 2);
  const Real slack = Real(2) * ctx.tol;
  const Real base_bound = params.B / (1 - A / 2);
  for (int i = 0; i < G; ++i)
    push_row(rep, "base", ts[0][i], vals[0][i], base_bound, slack);
  for (int n = 1; n <= n_max; ++n) {
    const Real bound = 1 / (A - 1) + params.h * pow(A, n);
    for (int i = 0; i < G; ++i)
      push_row(rep, "growth", ts[n][i], vals[n][i], bound, slack);
  }
  for (int n = 0; n < n_max; ++n) {
    for (int i = 0; i < G; ++i) {
      // 2*ts[n][i] == ts[n+1][i] exactly (binary doubling), so the doubled
      // value is already on the next octave's grid.
      push_row(rep, "doubling", ts[n][i], vals[n + 1][i], A * vals[n][i] - 1,
               slack);
    }
  }
  return rep;
}

F2Seed find_F2_seed(const Real& A, const PrecisionContext& ctx) {
  ctx.validate();
  PrecisionGuard guard(ctx.bits + 32);
  const Real floor_val = 1 / (A - 1);
  for (int j = 1; j < 1000; ++j) {
    const Real t = Real(j) / 100;
    const Real v =
        eval_poincare_series(PoincareVariant::alternating, A, t, ctx).value;
    const Real margin = v - floor_val;
    if (margin > 1e-6) return {t, margin - Real(1) / 1000000};
  }
  throw SeedInvalid("no t in (0,10) with F2(t) > 1/(A-1) + 1e-6 at A=" +
                    std::to_string(static_cast<double>(A)));
}

F2Report certify_F2_oscillation(const Real& A, const Real& t_seed,
                                const Real& h_seed, int n_max,
                                const PrecisionContext& ctx) {
  ctx.validate();
  if (n_max < 0) throw DomainError("certify_F2_oscillation: n_max < 0");
  PrecisionGuard guard(ctx.bits + 32);
  const auto F2 = [&](const Real& t) {
    return eval_poincare_series(PoincareVariant::alternating, A, t, ctx).value;
  };
  const Real floor_val = 1 / (A - 1);
  if (!(h_seed > 0))
    throw SeedInvalid("certify_F2_oscillation: h_seed must be positive");
  if (!(F2(t_seed) > floor_val + h_seed))
    throw SeedInvalid("certify_F2_oscillation: seed inequality fails");

  F2Report rep;
  rep.t_seed = t_seed;
  rep.h_seed = h_seed;
  const Real slack = Real(2) * ctx.tol;

  // Two-sided functional inequality |F2(2t) + A F2(t)| < 1 on the grid
  // t = j/100, j = 1..5000.  For j <= 2500 the doubled point is itself a grid
  // point, so cache the grid once.
  const int grid_n = 5000;
  std::vector<Real> cache(grid_n + 1);
  for (int j = 1; j <= grid_n; ++j) cache[j] = F2(Real(j) / 100);
  rep.cert.rows.reserve(grid_n + n_max + 1);
  for (int j = 1; j <= grid_n; ++j) {
    const Real t = Real(j) / 100;
    const Real v1 = cache[j];
    const Real v2 = (2 * j <= grid_n) ? cache[2 * j] : F2(Real(2 * j) / 100);
    CertRow row;
    row.family = "two_sided";
    row.t = t;
    row.value = v2;
    row.bound = -A * v1;  // center of the permitted band of half-width 1
    row.margin = 1 - abs(v2 + A * v1);
    row.pass = row.margin > -slack;
    rep.cert.all_pass = rep.cert.all_pass && row.pass;
    rep.cert.rows.push_back(std::move(row));
  }

  // Alternating growth from the seed: (-1)^n F2(2^n t) > 1/(A-1) + h A^n.
  for (int n = 0; n <= n_max; ++n) {
    const Real tn = ldexp(t_seed, n);
    const Real v = F2(tn);
    const Real signed_v = (n % 2 == 0) ? v : -v;
    push_row(rep.cert, "alternating", tn, signed_v,
             floor_val + h_seed * pow(A, n), slack);
  }
  return rep;
}

PellSolution pell_fundamental(long long D) {
  if (D < 2) throw DomainError("pell_fundamental: D must be >= 2");
  for (long long p = 2; p * p <= D; ++p)
    if (D % (p * p) == 0)
      throw NotSquarefree("pell_fundamental: " + std::to_string(p * p) +
                          " divides " + std::to_string(D));
  const long long v_cap = 1000000;
  const Int d(D);
  for (long long v = 1; v <= v_cap; ++v) {
    const Int rhs = d * v * v + 1;
    const Int u = sqrt(rhs);
    if (u * u == rhs) {
      PellSolution sol;
      sol.D = D;
      sol.u = u;
      sol.v = v;
      return sol;
    }
  }
  throw BudgetExceeded("pell_fundamental: no solution with v <= 10^6 for D=" +
                       std::to_string(D));
}

PellSolution pell_powers(const PellSolution& sol, int N) {
  if (N < 1) throw DomainError("pell_powers: N must be >= 1");
  if (N > 64) throw OutOfRange("pell_powers: N capped at 64");
  PellSolution out = sol;
  extend_powers(out.powers, out.u, out.v, out.D, N);
  return out;
}

Real pell_lambda(const PellSolution& sol, unsigned bits) {
  // 1/(u + v sqrt(D)) equals u - v sqrt(D) exactly and has no cancellation.
  PrecisionGuard guard(bits);
  return 1 / (Real(sol.u) + Real(sol.v) * sqrt(Real(sol.D)));
}

Real pell_lambda_pow(const PellSolution& sol, int n, unsigned bits) {
  if (n < 1) throw DomainError("pell_lambda_pow: n must be >= 1");
  PrecisionGuard guard(bits + 32);
  return pow(pell_lambda(sol, bits + 32), n);
}

Real pell_lambda_subtracted(const PellPower& p, long long D, unsigned bits) {
  // u_n - v_n sqrt(D) is ~1/(2 u_n) against terms of size u_n: the
  // subtraction cancels about 2*log2(u_n) bits, so work with that many extra.
  const unsigned cancel = static_cast<unsigned>(msb(p.u)) + 1;
  PrecisionGuard guard(bits + 2 * cancel + 32);
  return Real(p.u) - Real(p.v) * sqrt(Real(D));
}

SeriesValue eval_F3(const Real& A, const PellSolution& sol, const Real& t,
                    const PrecisionContext& ctx) {
  const double abs_t = std::abs(static_cast<double>(t));
  const int N = pell_depth(A, sol, std::max(abs_t, 1.0), ctx);
  PrecisionGuard guard(ctx.bits + 32);
  const Real lam = pell_lambda(sol, ctx.bits + 32);
  Real acc = 0;
  Real a_n = 1;
  Real lam_n = 1;
  for (int n = 1; n <= N; ++n) {
    a_n *= A;
    lam_n *= lam;
    acc += a_n * sin(lam_n * t);
  }
  const Real r = pell_ratio(A, sol);
  Real scale = abs(t);
  if (scale < 1) scale = 1;
  return {acc, scale * pow(r, N + 1) / (1 - r)};
}

SeriesValue eval_pell_kernel_g(const Real& A, const PellSolution& sol,
                               const Real& x1, const Real& x2,
                               const PrecisionContext& ctx) {
  const int N = pell_depth(A, sol, 1.0, ctx);
  std::vector<PellPower> powers = sol.powers;
  extend_powers(powers, sol.u, sol.v, sol.D, N);
  PrecisionGuard guard(ctx.bits + 32);
  const Real two_pi = 2 * pi_value();
  const Real c = A * pell_lambda(sol, ctx.bits + 32);
  Real acc = 0;
  Real c_n = 1;
  for (int n = 1; n <= N; ++n) {
    c_n *= c;
    const Real theta = frac(frac_int_mul(powers[n - 1].u, x1, ctx.bits + 32) -
                            frac_int_mul(powers[n - 1].v, x2, ctx.bits + 32));
    acc += c_n * cos(two_pi * theta);
  }
  const Real r = pell_ratio(A, sol);
  return {acc, pow(r, N + 1) / (1 - r)};
}

SeriesValue eval_pell_averaged_f(const Real& A, const PellSolution& sol,
                                 const Real& x, const PrecisionContext& ctx) {
  const int N = pell_depth(A, sol, 1.0, ctx);
  std::vector<PellPower> powers = sol.powers;
  extend_powers(powers, sol.u, sol.v, sol.D, N);
  PrecisionGuard guard(ctx.bits + 32);
  const Real pi = pi_value();
  const Real lam = pell_lambda(sol, ctx.bits + 32);
  Real acc = 0;
  Real a_n = 1;
  Real lam_n = 1;
  for (int n = 1; n <= N; ++n) {
    a_n *= A;
    lam_n *= lam;
    const Real vx = frac_int_mul(powers[n - 1].v, x, ctx.bits + 32);
    acc += a_n / pi * sin(pi * lam_n) * cos(pi * lam_n - 2 * pi * vx);
  }
  const Real r = pell_ratio(A, sol);
  return {acc, pow(r, N + 1) / (1 - r)};
}

Real pell_averaged_f_quadrature(const Real& A, const PellSolution& sol,
                                const Real& x, const PrecisionContext& ctx) {
  ctx.validate();
  PrecisionGuard guard(ctx.bits + 64);
  const Real sqrt_d = sqrt(Real(sol.D));
  const Real target = Real(ctx.tol) / 4;
  const auto integrand = [&](const Real& s) {
    return eval_pell_kernel_g(A, sol, s, s * sqrt_d + x, ctx).value;
  };
  return tanh_sinh(integrand, Real(0), Real(1), target).value;
}

IdentityReport certify_discrete_identity(const Real& A, const PellSolution& sol,
                                         long long t_max,
                                         const PrecisionContext& ctx) {
  if (t_max < 0) throw DomainError("certify_discrete_identity: t_max < 0");
  const int N = pell_depth(A, sol, 1.0, ctx);
  std::vector<PellPower> powers = sol.powers;
  extend_powers(powers, sol.u, sol.v, sol.D, N);
  // The orbit points feed phases 2 pi v_n x, so they need msb(v_N) guard bits
  // beyond the target precision to keep those phases certified.
  const unsigned orbit_bits =
      ctx.bits + static_cast<unsigned>(msb(powers.back().v)) + 64;

  IdentityReport rep;
  rep.max_residual = 0;
  PrecisionGuard guard(ctx.bits + 32);
  const Real two_pi = 2 * pi_value();
  const Real ten_tol = Real(10) * ctx.tol;

  Real orbit_x;   // frac(k sqrt(D)) carried at orbit precision
  Real sqrt_d_ext;
  {
    PrecisionGuard ext(orbit_bits);
    orbit_x = Real(0);
    sqrt_d_ext = sqrt(Real(sol.D));
  }

  Real lhs = 0;
  {
    IdentityRow row;
    row.t = 0;
    row.lhs = 0;
    row.rhs = 0;
    row.residual = 0;
    row.bound = ten_tol;
    row.pass = true;
    rep.rows.push_back(std::move(row));
  }
  for (long long k = 0; k < t_max; ++k) {
    lhs += eval_pell_averaged_f(A, sol, orbit_x, ctx).value;
    {
      PrecisionGuard ext(orbit_bits);
      orbit_x = frac(orbit_x + sqrt_d_ext);
    }
    const long long t = k + 1;
    IdentityRow row;
    row.t = t;
    row.lhs = lhs;
    row.rhs = eval_F3(A, sol, two_pi * t, ctx).value / two_pi;
    row.residual = abs(row.lhs - row.rhs);
    row.bound = Real(t + 1) * ten_tol;
    row.pass = row.residual <= row.bound;
    rep.all_pass = rep.all_pass && row.pass;
    if (row.residual > rep.max_residual) rep.max_residual = row.residual;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace kron
