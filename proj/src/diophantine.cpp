#include "kron/diophantine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace kron {

namespace {

// Exact residual of one integer vector against alpha at working precision.
BestApproximation make_record(const std::vector<Real>& alpha,
                              const std::vector<long long>& m,
                              const PrecisionContext& ctx) {
  PrecisionGuard guard(ctx.bits + 32);
  Real dot = 0;
  long long height = 0;
  for (size_t j = 0; j < m.size(); ++j) {
    if (m[j] != 0) dot += Real(m[j]) * alpha[j];
    height = std::max(height, std::llabs(m[j]));
  }
  Real delta = signed_nearest_delta(dot);
  PrecisionGuard out(ctx);
  BestApproximation rec;
  rec.m = m;
  rec.height = height;
  rec.delta = Real(delta);
  rec.zeta = abs(rec.delta);
  // A residual at rounding scale cannot be certified nonzero, and a zero
  // residual means the form is rational in disguise.
  if (rec.zeta <= Real(height + 1) * eps_for_bits(ctx.bits) * 64)
    throw PrecisionExhausted("residual at height " + std::to_string(height) +
                             " is below certification scale");
  return rec;
}

void canonicalize_sign(std::vector<long long>& m) {
  for (long long v : m) {
    if (v > 0) return;
    if (v < 0) break;
  }
  for (auto& v : m) v = -v;
}

long long default_budget(int dim) {
  switch (dim) {
    case 1: return 10000000;
    case 2: return 100000;
    case 3: return 1000;
    default: return 100;
  }
}

// Minimum over i of the distance of v + p[i] to the nearest integer, for
// v in [0,1) and p[i] in [0,1).  Branchless so the compiler can vectorize.
double row_min(const double* p, long long count, double v) {
  double best = 1.0;
  for (long long i = 0; i < count; ++i) {
    double s = v + p[i];
    if (s >= 1.0) s -= 1.0;
    double d = s < 1.0 - s ? s : 1.0 - s;
    best = d < best ? d : best;
  }
  return best;
}

double wrap1(double v) {
  if (v >= 1.0) v -= 1.0;
  if (v >= 1.0) v -= 1.0;
  return v;
}

double dist1(double v) {
  v = wrap1(v);
  return v < 1.0 - v ? v : 1.0 - v;
}

// Fractional parts of m * alpha_j as doubles, indexed by m + m_max.
// Each entry is rounded from working precision, so it is 0.5 ulp accurate
// regardless of the size of m (a plain double product is not).
std::vector<double> frac_table(const Real& alpha_j, long long m_max) {
  std::vector<double> t(2 * m_max + 1);
  Real cur = 0;
  for (long long m = 0; m <= m_max; ++m) {
    Real f = frac(cur);
    double fd = static_cast<double>(f);
    t[m_max + m] = fd;
    t[m_max - m] = fd == 0.0 ? 0.0 : 1.0 - fd;
    cur += alpha_j;
    if (cur >= 1) cur = frac(cur);
  }
  return t;
}

struct ShellScanState {
  double best_d = std::numeric_limits<double>::infinity();
  double shell_min = std::numeric_limits<double>::infinity();
};

}  // namespace

BestApproxList cf_best_approximations(const RealVector& alpha, long long m_max,
                                      const PrecisionContext& ctx) {
  ctx.validate();
  if (alpha.dim() != 1)
    throw DomainError("cf_best_approximations: alpha must be 1-dimensional");
  if (m_max < 1) throw DomainError("cf_best_approximations: m_max must be >= 1");
  PrecisionGuard guard(ctx);
  const std::vector<Real> a = alpha.render(ctx.bits);
  const Real eps_floor = eps_for_bits(ctx.bits) * 1024;
  // The forward recurrence is reliable while q^2 stays well inside the
  // mantissa; past that the computed partial quotients are noise.
  const Int q_guard = Int(1) << (ctx.bits > 96 ? (ctx.bits - 64) / 2 : 16);

  BestApproxList out;
  out.dim = 1;
  out.alpha_spec = alpha.spec_string;
  out.search_bound = m_max;

  Real x = a[0];
  Int q_m2 = 1, q_m1 = 0;  // q_{-2}, q_{-1}: q_k = a_k q_{k-1} + q_{k-2}
  Real best_zeta;
  while (true) {
    Real fl = floor(x);
    Int ai;
    mpfr_get_z(ai.backend().data(), fl.backend().data(), MPFR_RNDN);
    Int q = ai * q_m1 + q_m2;
    if (q > m_max) break;
    if (q > q_guard)
      throw PrecisionExhausted("cf_best_approximations: convergents exceed "
                               "what ctx.bits certifies");
    q_m2 = q_m1;
    q_m1 = q;
    BestApproximation rec = make_record(a, {q.convert_to<long long>()}, ctx);
    if (out.records.empty() ||
        (rec.zeta < best_zeta && rec.height > out.records.back().height)) {
      rec.nu = static_cast<long long>(out.records.size()) + 1;
      out.records.push_back(rec);
      best_zeta = rec.zeta;
    }
    Real fr = x - fl;
    if (fr <= eps_floor) {
      // The next partial quotient is at least floor(1/(fr + eps)); if even
      // that pushes the denominator past m_max the list is already complete,
      // otherwise the digits can no longer be certified at ctx.bits.
      Real next_q_lb = Real(q_m1) / (fr + eps_floor);
      if (next_q_lb > Real(m_max)) break;
      throw PrecisionExhausted("cf_best_approximations: expansion terminates "
                               "below certification scale (rational alpha?)");
    }
    x = 1 / fr;
  }
  if (out.records.empty())
    throw PrecisionExhausted("cf_best_approximations: no records certified");
  return out;
}

namespace {

// Shared by the 2-D and 3-D scans: verify double-precision candidates at
// working precision and append a record if the shell truly improves the
// running minimum.
void verify_shell_candidates(const std::vector<Real>& a,
                             std::vector<std::vector<long long>>& cands,
                             const PrecisionContext& ctx, BestApproxList& out,
                             double& best_d) {
  if (cands.empty()) return;
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  bool have = false;
  BestApproximation best_rec;
  for (auto& m : cands) {
    BestApproximation rec = make_record(a, m, ctx);
    if (!have || rec.zeta < best_rec.zeta) {  // first lex wins ties: strict <
      best_rec = rec;
      have = true;
    }
  }
  if (!have) return;
  if (out.records.empty() || best_rec.zeta < out.records.back().zeta) {
    best_rec.nu = static_cast<long long>(out.records.size()) + 1;
    out.records.push_back(best_rec);
    best_d = static_cast<double>(best_rec.zeta);
  }
}

BestApproxList enumerate_1d(const std::vector<Real>& a, long long m_max,
                            const PrecisionContext& ctx) {
  BestApproxList out;
  out.dim = 1;
  out.search_bound = m_max;
  Real best;
  for (long long q = 1; q <= m_max; ++q) {
    BestApproximation rec = make_record(a, {q}, ctx);
    if (out.records.empty() || rec.zeta < best) {
      rec.nu = static_cast<long long>(out.records.size()) + 1;
      out.records.push_back(rec);
      best = rec.zeta;
    }
  }
  return out;
}

BestApproxList enumerate_2d(const std::vector<Real>& a, long long m_max,
                            const PrecisionContext& ctx) {
  BestApproxList out;
  out.dim = 2;
  out.search_bound = m_max;
  const std::vector<double> t1 = frac_table(a[0], m_max);
  const std::vector<double> t2 = frac_table(a[1], m_max);
  const long long off = m_max;
  double best_d = std::numeric_limits<double>::infinity();
  const double slack = 1e-13;

  for (long long M = 1; M <= m_max; ++M) {
    // Shell max|m| = M, canonical representatives:
    //   (M, m2) for m2 in [-M, M];  (m1, +-M) for m1 in [1, M-1];  (0, M).
    auto shell_visit = [&](auto&& fn) {
      double v1 = t1[off + M];
      for (long long m2 = -M; m2 <= M; ++m2) fn(v1 + t2[off + m2], M, m2);
      for (long long m1 = 1; m1 < M; ++m1) {
        double v = t1[off + m1];
        fn(v + t2[off + M], m1, M);
        fn(v + t2[off - M], m1, -M);
      }
      fn(t2[off + M], 0LL, M);
    };
    double shell_min = std::numeric_limits<double>::infinity();
    shell_visit([&](double v, long long, long long) {
      double d = dist1(v);
      if (d < shell_min) shell_min = d;
    });
    if (shell_min <= best_d + slack) {
      std::vector<std::vector<long long>> cands;
      shell_visit([&](double v, long long m1, long long m2) {
        if (dist1(v) <= shell_min + slack) cands.push_back({m1, m2});
      });
      verify_shell_candidates(a, cands, ctx, out, best_d);
    }
  }
  return out;
}

BestApproxList enumerate_3d(const std::vector<Real>& a, long long m_max,
                            const PrecisionContext& ctx) {
  BestApproxList out;
  out.dim = 3;
  out.search_bound = m_max;
  const std::vector<double> t1 = frac_table(a[0], m_max);
  const std::vector<double> t2 = frac_table(a[1], m_max);
  const std::vector<double> t3 = frac_table(a[2], m_max);
  const long long off = m_max;
  double best_d = std::numeric_limits<double>::infinity();
  const double slack = 1e-13;

  for (long long M = 1; M <= m_max; ++M) {
    // Shell faces, canonical sign (first nonzero positive):
    //   m1 = M:                         m2, m3 in [-M, M]^2        (rows in m3)
    //   m1 in [1, M-1], m2 = +-M:       m3 in [-M, M]              (rows in m3)
    //   m1 in [1, M-1], |m2| < M:       m3 = +-M                   (rows in m2)
    //   m1 = 0: m2 = M, m3 in [-M, M];  m2 in [1, M-1], m3 = +-M;  (0, 0, M).
    auto for_rows_m3 = [&](auto&& row) {
      double v1 = t1[off + M];
      for (long long m2 = -M; m2 <= M; ++m2)
        row(wrap1(v1 + t2[off + m2]), M, m2);
      for (long long m1 = 1; m1 < M; ++m1) {
        double v = t1[off + m1];
        row(wrap1(v + t2[off + M]), m1, M);
        row(wrap1(v + t2[off - M]), m1, -M);
      }
      row(t2[off + M], 0LL, M);
    };
    auto for_rows_m2 = [&](auto&& row) {
      // m3 = +-M faces; the row runs over the interior range of m2.
      for (long long m1 = 1; m1 < M; ++m1) {
        double v = t1[off + m1];
        row(wrap1(v + t3[off + M]), m1, M, -(M - 1), M - 1);
        row(wrap1(v + t3[off - M]), m1, -M, -(M - 1), M - 1);
      }
      row(t3[off + M], 0LL, M, 1, M - 1);
      row(t3[off - M], 0LL, -M, 1, M - 1);
    };

    double shell_min = std::numeric_limits<double>::infinity();
    for_rows_m3([&](double v, long long, long long) {
      double d = row_min(t3.data() + (off - M), 2 * M + 1, v);
      if (d < shell_min) shell_min = d;
    });
    for_rows_m2([&](double v, long long, long long, long long lo, long long hi) {
      if (hi < lo) return;
      double d = row_min(t2.data() + (off + lo), hi - lo + 1, v);
      if (d < shell_min) shell_min = d;
    });
    {
      double d = dist1(t3[off + M]);  // (0, 0, M)
      if (d < shell_min) shell_min = d;
    }

    if (shell_min <= best_d + slack) {
      std::vector<std::vector<long long>> cands;
      const double thresh = shell_min + slack;
      for_rows_m3([&](double v, long long m1, long long m2) {
        for (long long m3 = -M; m3 <= M; ++m3)
          if (dist1(v + t3[off + m3]) <= thresh) cands.push_back({m1, m2, m3});
      });
      for_rows_m2([&](double v, long long m1, long long m3, long long lo,
                      long long hi) {
        for (long long m2 = lo; m2 <= hi; ++m2)
          if (dist1(v + t2[off + m2]) <= thresh) cands.push_back({m1, m2, m3});
      });
      if (dist1(t3[off + M]) <= thresh) cands.push_back({0, 0, M});
      verify_shell_candidates(a, cands, ctx, out, best_d);
    }
  }
  return out;
}

}  // namespace

BestApproxList enumerate_best_approximations(const RealVector& alpha,
                                             long long m_max,
                                             const PrecisionContext& ctx,
                                             long long budget_cap) {
  ctx.validate();
  const int n = alpha.dim();
  if (n < 1 || n > 3)
    throw DomainError("enumerate_best_approximations: dimension must be 1..3");
  if (m_max < 1)
    throw DomainError("enumerate_best_approximations: m_max must be >= 1");
  const long long cap = budget_cap > 0 ? budget_cap : default_budget(n);
  if (m_max > cap)
    throw BudgetExceeded("enumerate_best_approximations: m_max " +
                         std::to_string(m_max) + " exceeds budget " +
                         std::to_string(cap));
  PrecisionGuard guard(ctx);
  const std::vector<Real> a = alpha.render(ctx.bits);
  BestApproxList out;
  switch (n) {
    case 1: out = enumerate_1d(a, m_max, ctx); break;
    case 2: out = enumerate_2d(a, m_max, ctx); break;
    default: out = enumerate_3d(a, m_max, ctx); break;
  }
  out.alpha_spec = alpha.spec_string;
  return out;
}

Real psi(const BestApproxList& ba, long long t) {
  if (ba.records.empty()) throw InsufficientData("psi: empty record list");
  if (t < ba.records.front().height)
    throw OutOfRange("psi: t below the first record height");
  if (t > ba.search_bound)
    throw OutOfRange("psi: t beyond the certified search bound");
  const BestApproximation* last = nullptr;
  for (const auto& r : ba.records) {
    if (r.height > t) break;
    last = &r;
  }
  return last->zeta;
}

SimultaneousList simultaneous_best(const RealVector& alpha, long long q_max,
                                   const PrecisionContext& ctx) {
  ctx.validate();
  if (q_max < 1) throw DomainError("simultaneous_best: q_max must be >= 1");
  PrecisionGuard guard(ctx);
  const std::vector<Real> a = alpha.render(ctx.bits);
  SimultaneousList out;
  out.dim = alpha.dim();
  out.q_max = q_max;
  out.alpha_spec = alpha.spec_string;
  Real best;
  for (long long q = 1; q <= q_max; ++q) {
    Real r = 0;
    for (const Real& aj : a) {
      Real d = nearest_int_norm(Real(q) * aj);
      if (d > r) r = d;
    }
    if (out.records.empty() || r < best) {
      SimultaneousRecord rec;
      rec.nu = static_cast<long long>(out.records.size()) + 1;
      rec.q = q;
      rec.r = r;
      out.records.push_back(rec);
      best = r;
    }
  }
  return out;
}

Real psi_star(const SimultaneousList& sa, long long t) {
  if (sa.records.empty()) throw InsufficientData("psi_star: empty record list");
  if (t < sa.records.front().q)
    throw OutOfRange("psi_star: t below the first record");
  if (t > sa.q_max) throw OutOfRange("psi_star: t beyond the search bound");
  const SimultaneousRecord* last = nullptr;
  for (const auto& r : sa.records) {
    if (r.q > t) break;
    last = &r;
  }
  return last->r;
}

ExponentEstimate estimate_exponents(const BestApproxList& ba,
                                    const SimultaneousList& sa) {
  const long long depth_ba = ba.depth();
  const long long depth_sa = sa.depth();
  if (depth_ba < 5 || depth_sa < 5)
    throw InsufficientData("estimate_exponents: need at least 5 records per list");
  ExponentEstimate est;
  est.depth_ba = depth_ba;
  est.depth_sa = depth_sa;

  auto ratio = [](const Real& zeta, long long next_height) {
    return -static_cast<double>(log(zeta)) /
           std::log(static_cast<double>(next_height));
  };

  // Ordinary exponent: the constant in zeta_nu ~ c * M_{nu+1}^{-omega} decays
  // like 1/log M, so only the deep half of the list is informative.
  const long long nu0_omega = std::max<long long>(2, (depth_ba + 1) / 2);
  double omega = -std::numeric_limits<double>::infinity();
  for (long long i = nu0_omega; i + 1 <= depth_ba; ++i) {
    double v = ratio(ba.records[i - 1].zeta, ba.records[i].height);
    omega = std::max(omega, v);
  }
  est.omega_est = omega;

  double omega_hat = std::numeric_limits<double>::infinity();
  for (long long i = 2; i + 1 <= depth_ba; ++i) {
    double v = ratio(ba.records[i - 1].zeta, ba.records[i].height);
    omega_hat = std::min(omega_hat, v);
  }
  est.omega_hat_est = omega_hat;

  double lambda_hat = std::numeric_limits<double>::infinity();
  for (long long i = 2; i + 1 <= depth_sa; ++i) {
    double v = -static_cast<double>(log(sa.records[i - 1].r)) /
               std::log(static_cast<double>(sa.records[i].q));
    lambda_hat = std::min(lambda_hat, v);
  }
  est.lambda_hat_est = lambda_hat;
  return est;
}

Real exponent_ratio_root(int n, const Real& omega_hat) {
  if (n < 2) throw DomainError("exponent_ratio_root: n must be >= 2");
  if (omega_hat < n)
    throw DomainError("exponent_ratio_root: omega_hat must be >= n");
  PrecisionGuard guard(128);
  auto R = [&](const Real& x) {
    Real s = 0, p = 1;
    for (int k = 0; k < n; ++k) {
      s += p;
      p *= x;
    }
    return s - omega_hat;
  };
  Real lo = 1, hi = omega_hat;
  const Real tol_r = Real("1e-13");
  if (abs(R(lo)) <= tol_r) return lo;
  if (abs(R(hi)) <= tol_r) return hi;
  for (int it = 0; it < 400; ++it) {
    Real mid = (lo + hi) / 2;
    Real v = R(mid);
    if (abs(v) <= tol_r) return mid;
    if (v < 0) lo = mid; else hi = mid;
  }
  throw DepthExceeded("exponent_ratio_root: bisection did not certify |R| <= 1e-13");
}

GnStar g_n_star(int n, const PrecisionContext& ctx) {
  ctx.validate();
  if (n < 2) throw DomainError("g_n_star: n must be >= 2");
  PrecisionGuard guard(ctx);
  auto g = [&](const Real& t) {
    Real tn = pow(t, n);
    return (tn - 1) * (2 - t) / (t - 1);
  };
  GnStar out;
  out.argmax = 2 - Real(2) / (n + 1);
  out.g_star = (Real(2) / (n - 1)) * (pow(Real(2), n) * pow(1 - Real(1) / (n + 1), n) - 1);
  const Real step = Real(1) / 10000;
  Real gmax = 0;
  for (long long i = 1; i <= 9999; ++i) {
    Real v = g(1 + step * i);
    if (v > gmax) gmax = v;
  }
  out.grid_max = gmax;
  return out;
}

Real jarnik_transfer(int n, const Real& omega_hat) {
  if (n < 2) throw DomainError("jarnik_transfer: n must be >= 2");
  if (omega_hat < 1) throw DomainError("jarnik_transfer: omega_hat must be >= 1");
  return (1 - 1 / omega_hat) / (n - 1);
}

Real badly_approximable_margin(const BestApproxList& ba) {
  if (ba.depth() < 2)
    throw InsufficientData("badly_approximable_margin: need at least 2 records");
  Real margin;
  bool first = true;
  for (long long i = 0; i + 1 < ba.depth(); ++i) {
    Real v = ba.records[i].zeta *
             pow(Real(ba.records[i + 1].height), ba.dim);
    if (first || v < margin) {
      margin = v;
      first = false;
    }
  }
  return margin;
}

}  // namespace kron
