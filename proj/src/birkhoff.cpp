#include "kron/birkhoff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>

namespace kron {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> render_double(const RealVector& v) {
  std::vector<double> out;
  for (const Real& r : v.render(96)) out.push_back(static_cast<double>(r));
  return out;
}

double frac_d(double x) { return x - std::floor(x); }

void require_harmonic_kinds(const TrigSeriesFunction& f, const char* who) {
  for (const auto& t : f.terms)
    if (t.kind != TermKind::sin && t.kind != TermKind::cos)
      throw DomainError(std::string(who) + ": only sin/cos terms admitted");
}

void require_zero_mean(const TrigSeriesFunction& f,
                       const PrecisionContext& ctx, const char* who) {
  if (abs(analytic_mean(f, ctx)) > Real(ctx.tol))
    throw DomainError(std::string(who) + ": zero-mean series required");
}

// Double-precision closed form for sum_{k=k0}^{k0+t-1} K(2 pi m.x + phase
// + 2 pi k theta): returns (P, Q) with the sum equal to P cos u + Q sin u,
// u = 2 pi (m.x).  k0 = 0 gives the orbit sum, k0 = 1 the shifted one.
struct PQ {
  double p = 0, q = 0;
};

PQ dirichlet_pq(double coeff, TermKind kind, double phase, double theta,
                long long t, long long k0) {
  const double s = std::sin(kPi * theta);
  double ratio, psi;
  if (std::abs(s) < 1e-300) {
    ratio = static_cast<double>(t);
    psi = phase;
  } else {
    ratio = std::sin(kPi * t * theta) / s;
    psi = phase + kPi * (t - 1 + 2 * k0) * theta;
  }
  const double c = coeff * ratio;
  PQ pq;
  if (kind == TermKind::cos) {
    pq.p = c * std::cos(psi);
    pq.q = -c * std::sin(psi);
  } else {
    pq.p = c * std::sin(psi);
    pq.q = c * std::cos(psi);
  }
  return pq;
}

// Dilated-orbit sum S^t(x) = sum_{k=1..t} f(k x) in double via the closed
// form (theta = m.x itself).
double dilate_sum(const TrigSeriesFunction& f, const std::vector<double>& x,
                  long long t) {
  double acc = 0;
  for (const auto& term : f.terms) {
    double mx = 0;
    for (size_t j = 0; j < term.freq.size(); ++j) mx += term.freq[j] * x[j];
    const double theta = frac_d(mx);
    const PQ pq = dirichlet_pq(static_cast<double>(term.coeff), term.kind,
                               static_cast<double>(term.phase), theta, t, 1);
    // At u = 0: the whole sum collapsed into the phase.
    acc += pq.p;
  }
  return acc;
}

double eval_series_double(const TrigSeriesFunction& f,
                          const std::vector<double>& x) {
  double acc = 0;
  for (const auto& term : f.terms) {
    double mx = 0;
    for (size_t j = 0; j < term.freq.size(); ++j) mx += term.freq[j] * x[j];
    const double u = 2 * kPi * frac_d(mx) + static_cast<double>(term.phase);
    const double c = static_cast<double>(term.coeff);
    acc += term.kind == TermKind::cos ? c * std::cos(u) : c * std::sin(u);
  }
  return acc;
}

// Composite Simpson over a box, refined by doubling until successive values
// agree to 1e-4.  Returns the stable value and the points spent.
struct QuadOut {
  double value = 0;
  long long points = 0;
};

QuadOut simpson_box(const std::function<double(const std::vector<double>&)>& g,
                    const std::vector<std::pair<double, double>>& box,
                    int start_panels) {
  const int n = static_cast<int>(box.size());
  auto pass = [&](long long panels) {
    const long long nodes = 2 * panels + 1;
    double total_nodes = 1;
    for (int j = 0; j < n; ++j) total_nodes *= static_cast<double>(nodes);
    if (total_nodes > double(1) * (1 << 22))
      throw QuadratureUnstable("simpson_box: refinement budget exhausted");
    std::vector<double> x(n);
    std::vector<long long> idx(n, 0);
    double acc = 0;
    bool done = false;
    while (!done) {
      double w = 1;
      for (int j = 0; j < n; ++j) {
        const double h = (box[j].second - box[j].first) / (2 * panels);
        x[j] = box[j].first + idx[j] * h;
        const double wj =
            (idx[j] == 0 || idx[j] == 2 * panels) ? 1 : (idx[j] % 2 ? 4 : 2);
        w *= wj * h / 3;
      }
      acc += w * g(x);
      int j = 0;
      for (; j < n; ++j) {
        if (++idx[j] < nodes) break;
        idx[j] = 0;
      }
      done = j == n;
    }
    return acc;
  };

  long long panels = std::max(2, start_panels);
  double prev = pass(panels);
  for (int level = 0; level < 9; ++level) {
    panels *= 2;
    const double cur = pass(panels);
    if (std::abs(cur - prev) <= 1e-4) {
      QuadOut out;
      out.value = cur;
      long long nodes = 2 * panels + 1;
      out.points = 1;
      for (int j = 0; j < n; ++j) out.points *= nodes;
      return out;
    }
    prev = cur;
  }
  throw QuadratureUnstable("simpson_box: no 1e-4 stability within 9 levels");
}

double sup_on_grid(const TrigSeriesFunction& f, int per_dim) {
  const int n = f.dim;
  std::vector<long long> idx(n, 0);
  std::vector<double> x(n);
  double best = 0;
  bool done = false;
  while (!done) {
    for (int j = 0; j < n; ++j) x[j] = double(idx[j]) / per_dim;
    best = std::max(best, std::abs(eval_series_double(f, x)));
    int j = 0;
    for (; j < n; ++j) {
      if (++idx[j] < per_dim) break;
      idx[j] = 0;
    }
    done = j == n;
  }
  return best;
}

int dense_grid_for(int dim) {
  switch (dim) {
    case 1: return 4096;
    case 2: return 512;
    default: return 128;
  }
}

void require_box(const std::vector<std::pair<double, double>>& box) {
  for (const auto& [a, b] : box)
    if (!(0 <= a && a < b && b <= 1))
      throw DomainError("integral_bound_probe: box must satisfy 0<=a<b<=1");
}

}  // namespace

TrigSeriesFunction realize_decay(const DecaySpec& spec, int dim, int m_cap) {
  if (!(spec.C > 0) || !(spec.gamma > 0))
    throw DomainError("realize_decay: C and gamma must be positive");
  if (dim < 1 || dim > 3 || m_cap < 1)
    throw DomainError("realize_decay: need 1 <= dim <= 3 and m_cap >= 1");
  TrigSeriesFunction f;
  f.dim = dim;
  f.label = "decay(C=" + std::to_string(spec.C) +
            ",gamma=" + std::to_string(spec.gamma) +
            ",cap=" + std::to_string(m_cap) + ")";
  std::vector<long long> m(dim, -m_cap);
  bool done = false;
  while (!done) {
    long long maxabs = 0;
    long long first_nonzero = 0;
    for (int j = 0; j < dim; ++j) {
      maxabs = std::max(maxabs, std::abs(m[j]));
      if (first_nonzero == 0) first_nonzero = m[j];
    }
    if (maxabs > 0 && first_nonzero > 0) {
      TrigTerm t;
      t.coeff = Real(spec.C) * pow(Real(maxabs), Real(-spec.gamma));
      t.freq = m;
      t.phase = 0;
      t.kind = TermKind::cos;
      f.terms.push_back(std::move(t));
    }
    int j = dim - 1;  // lexicographic: last coordinate fastest
    for (; j >= 0; --j) {
      if (++m[j] <= m_cap) break;
      m[j] = -m_cap;
    }
    done = j < 0;
  }
  return f;
}

SeriesValue birkhoff_sum(const TrigSeriesFunction& f, const RealVector& alpha,
                         const std::vector<Real>& x, long long t,
                         const PrecisionContext& ctx) {
  ctx.validate();
  if (alpha.dim() != f.dim || static_cast<int>(x.size()) != f.dim)
    throw DomainError("birkhoff_sum: dimension mismatch");
  if (t < 0) throw DomainError("birkhoff_sum: t must be >= 0");
  PrecisionGuard guard(ctx.bits + 64);
  const std::vector<Real> a = alpha.render(ctx.bits + 64);
  std::vector<Real> pos;
  for (const Real& xi : x) pos.push_back(frac(xi));
  Real acc = 0;
  for (long long k = 0; k < t; ++k) {
    acc += eval_series(f, pos, ctx).value;
    for (int j = 0; j < f.dim; ++j) pos[j] = frac(pos[j] + a[j]);
  }
  const Real rounding =
      Real(t) * eps_for_bits(ctx.bits) * (sup_norm_bound(f, ctx) + 1);
  return {acc, Real(t) * f.tail_sup + rounding};
}

Real dirichlet_harmonic_sum(const TrigTerm& term, const Real& alpha,
                            const Real& x, long long t) {
  if (term.kind != TermKind::sin && term.kind != TermKind::cos)
    throw DomainError("dirichlet_harmonic_sum: sin/cos kinds only");
  if (term.freq.size() != 1)
    throw DomainError("dirichlet_harmonic_sum: one-dimensional terms only");
  if (t < 0) throw DomainError("dirichlet_harmonic_sum: t must be >= 0");
  if (t == 0) return Real(0);
  const Real pi = pi_value();
  const long long m = term.freq[0];
  const Real theta = frac(Real(m) * alpha);
  const Real s = sin(pi * theta);
  Real ratio, psi;
  if (s == 0) {
    ratio = t;
    psi = term.phase;
  } else {
    ratio = sin(pi * Real(t) * theta) / s;
    psi = term.phase + pi * Real(t - 1) * theta;
  }
  const Real u = 2 * pi * frac(Real(m) * x) + psi;
  return term.kind == TermKind::cos ? term.coeff * ratio * cos(u)
                                    : term.coeff * ratio * sin(u);
}

double discrepancy_1d(const RealVector& alpha, long long t) {
  if (alpha.dim() != 1) throw DomainError("discrepancy_1d: scalar alpha only");
  if (t < 1) throw DomainError("discrepancy_1d: t must be >= 1");
  if (t > 50000000) throw BudgetExceeded("discrepancy_1d: t too large");
  const double a = render_double(alpha)[0];
  std::vector<double> u(static_cast<size_t>(t));
  for (long long k = 1; k <= t; ++k)
    u[static_cast<size_t>(k - 1)] = frac_d(k * a);
  std::sort(u.begin(), u.end());
  double best = 0;
  for (long long i = 0; i <= t; ++i) {
    const double lo = i == 0 ? 0.0 : u[static_cast<size_t>(i - 1)];
    const double hi = i == t ? 1.0 : u[static_cast<size_t>(i)];
    best = std::max(best, std::abs(i - t * lo));
    best = std::max(best, std::abs(i - t * hi));
  }
  return best;
}

double total_variation(const TrigSeriesFunction& f) {
  if (f.dim != 1) throw DomainError("total_variation: one-dimensional only");
  auto feval = [&](double x) {
    double acc = 0;
    for (const auto& t : f.terms) {
      const double c = static_cast<double>(t.coeff);
      const double ph = static_cast<double>(t.phase);
      const double m = static_cast<double>(t.freq[0]);
      switch (t.kind) {
        case TermKind::sin: acc += c * std::sin(2 * kPi * m * x + ph); break;
        case TermKind::cos: acc += c * std::cos(2 * kPi * m * x + ph); break;
        case TermKind::abs_sin:
          acc += c * std::abs(std::sin(kPi * m * x + ph));
          break;
        case TermKind::sin_sq: {
          const double s = std::sin(kPi * m * x + ph);
          acc += c * s * s;
          break;
        }
      }
    }
    return acc;
  };
  auto fprime = [&](double x) {
    double acc = 0;
    for (const auto& t : f.terms) {
      const double c = static_cast<double>(t.coeff);
      const double ph = static_cast<double>(t.phase);
      const double m = static_cast<double>(t.freq[0]);
      switch (t.kind) {
        case TermKind::sin:
          acc += c * 2 * kPi * m * std::cos(2 * kPi * m * x + ph);
          break;
        case TermKind::cos:
          acc -= c * 2 * kPi * m * std::sin(2 * kPi * m * x + ph);
          break;
        case TermKind::abs_sin: {
          const double s = std::sin(kPi * m * x + ph);
          const double sgn = s > 0 ? 1 : (s < 0 ? -1 : 0);
          acc += c * kPi * m * std::cos(kPi * m * x + ph) * sgn;
          break;
        }
        case TermKind::sin_sq:
          acc += c * kPi * m * std::sin(2 * (kPi * m * x + ph));
          break;
      }
    }
    return acc;
  };

  long long max_m = 1;
  bool any_freq = false;
  for (const auto& t : f.terms) {
    max_m = std::max(max_m, std::abs(t.freq[0]));
    any_freq = any_freq || t.freq[0] != 0;
  }
  if (f.terms.empty() || !any_freq) return 0;

  // Breakpoints: interval ends plus every |sin| kink.
  std::vector<double> brk = {0.0, 1.0};
  for (const auto& t : f.terms) {
    if (t.kind != TermKind::abs_sin || t.freq[0] == 0) continue;
    const double m = static_cast<double>(t.freq[0]);
    const double ph = static_cast<double>(t.phase);
    const long long mid = static_cast<long long>(std::floor(ph / kPi));
    const long long lo = mid - std::llabs(t.freq[0]) - 2;
    const long long hi = mid + std::llabs(t.freq[0]) + 2;
    for (long long k = lo; k <= hi; ++k) {
      const double x = (k - ph / kPi) / m;
      if (x > 0 && x < 1) brk.push_back(x);
    }
  }
  std::sort(brk.begin(), brk.end());
  brk.erase(std::unique(brk.begin(), brk.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-15; }),
            brk.end());

  // Critical points: derivative sign changes inside each smooth piece.
  std::vector<double> nodes = brk;
  for (size_t i = 0; i + 1 < brk.size(); ++i) {
    const double a = brk[i], b = brk[i + 1];
    const int steps =
        std::max<int>(16, static_cast<int>(std::ceil(256.0 * max_m * (b - a))));
    double x0 = a + (b - a) * 1e-9;
    double g0 = fprime(x0);
    for (int s = 1; s <= steps; ++s) {
      const double x1 = a + (b - a) * (s == steps ? 1 - 1e-9 : double(s) / steps);
      const double g1 = fprime(x1);
      if ((g0 < 0 && g1 > 0) || (g0 > 0 && g1 < 0)) {
        double lo = x0, hi = x1, glo = g0;
        for (int it = 0; it < 80; ++it) {
          const double mid = (lo + hi) / 2;
          const double gm = fprime(mid);
          if ((glo < 0) == (gm < 0)) {
            lo = mid;
            glo = gm;
          } else {
            hi = mid;
          }
        }
        nodes.push_back((lo + hi) / 2);
      }
      x0 = x1;
      g0 = g1;
    }
  }
  std::sort(nodes.begin(), nodes.end());
  double v = 0;
  for (size_t i = 0; i + 1 < nodes.size(); ++i)
    v += std::abs(feval(nodes[i + 1]) - feval(nodes[i]));
  return v;
}

SumTrace koksma_probe(const TrigSeriesFunction& f, const RealVector& alpha,
                      long long t_max, const PrecisionContext& ctx) {
  ctx.validate();
  if (f.dim != 1 || alpha.dim() != 1)
    throw DomainError("koksma_probe: one-dimensional only");
  if (t_max < 1) throw DomainError("koksma_probe: t_max must be >= 1");
  require_zero_mean(f, ctx, "koksma_probe");
  const double v = total_variation(f);

  PrecisionGuard guard(ctx.bits + 64);
  const Real a = alpha.render(ctx.bits + 64)[0];
  SumTrace trace;
  trace.alpha_desc = alpha.spec_string;
  trace.f_desc = f.label;
  trace.probe = "koksma";
  trace.slack = 1e-6;
  trace.rows.reserve(static_cast<size_t>(t_max));

  std::vector<double> sorted;  // {k alpha} in increasing order
  sorted.reserve(static_cast<size_t>(t_max));
  Real pos = 0;
  Real s = 0;
  for (long long t = 1; t <= t_max; ++t) {
    pos = frac(pos + a);
    s += eval_series(f, {pos}, ctx).value;
    const double u = static_cast<double>(pos);
    sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), u), u);
    double d = 0;
    for (long long i = 0; i <= t; ++i) {
      const double lo = i == 0 ? 0.0 : sorted[static_cast<size_t>(i - 1)];
      const double hi = i == t ? 1.0 : sorted[static_cast<size_t>(i)];
      d = std::max(d, std::abs(i - t * lo));
      d = std::max(d, std::abs(i - t * hi));
    }
    SumRow row;
    row.t = t;
    row.s = abs(s);
    row.bound = Real(v) * Real(d);
    row.pass = row.s <= row.bound + Real(trace.slack) + Real(t) * f.tail_sup;
    trace.all_pass = trace.all_pass && row.pass;
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

SumTrace weyl_probe(const TrigSeriesFunction& f, const RealVector& alpha,
                    const std::vector<Real>& x,
                    const std::vector<long long>& t_list,
                    const PrecisionContext& ctx, double threshold) {
  ctx.validate();
  if (alpha.dim() != f.dim || static_cast<int>(x.size()) != f.dim)
    throw DomainError("weyl_probe: dimension mismatch");
  if (t_list.empty() || t_list.front() < 1 ||
      !std::is_sorted(t_list.begin(), t_list.end()))
    throw DomainError("weyl_probe: need ascending times >= 1");
  const Real mean = analytic_mean(f, ctx);

  PrecisionGuard guard(ctx.bits + 64);
  const std::vector<Real> a = alpha.render(ctx.bits + 64);
  std::vector<Real> pos;
  for (const Real& xi : x) pos.push_back(frac(xi));
  SumTrace trace;
  trace.alpha_desc = alpha.spec_string;
  trace.f_desc = f.label;
  trace.probe = "weyl";
  trace.slack = 0;
  Real s = 0;
  long long k = 0;
  for (long long t : t_list) {
    for (; k < t; ++k) {
      s += eval_series(f, pos, ctx).value;
      for (int j = 0; j < f.dim; ++j) pos[j] = frac(pos[j] + a[j]);
    }
    SumRow row;
    row.t = t;
    row.s = abs(s / Real(t) - mean);
    row.bound = Real(threshold);
    row.pass = row.s <= row.bound;
    trace.rows.push_back(std::move(row));
  }
  // The ergodic contract concerns the largest horizon only.
  trace.all_pass = trace.rows.back().pass;
  return trace;
}

SumTrace sidorov_probe(const TrigSeriesFunction& f, const RealVector& alpha,
                       const std::vector<long long>& conv_denominators,
                       int x_grid, const PrecisionContext& ctx,
                       double threshold) {
  ctx.validate();
  if (f.dim != 1 || alpha.dim() != 1)
    throw DomainError("sidorov_probe: one-dimensional only");
  require_harmonic_kinds(f, "sidorov_probe");
  require_zero_mean(f, ctx, "sidorov_probe");
  if (conv_denominators.empty() || conv_denominators.front() < 1 ||
      !std::is_sorted(conv_denominators.begin(), conv_denominators.end()))
    throw DomainError("sidorov_probe: need ascending denominators >= 1");
  if (x_grid < 1) throw DomainError("sidorov_probe: x_grid must be >= 1");

  PrecisionGuard guard(ctx.bits + 32);
  const Real a = alpha.render(ctx.bits + 32)[0];
  SumTrace trace;
  trace.alpha_desc = alpha.spec_string;
  trace.f_desc = f.label;
  trace.probe = "sidorov";
  trace.slack = 0;
  for (long long q : conv_denominators) {
    Real worst = 0;
    for (int i = 0; i < x_grid; ++i) {
      const Real xi = Real(i) / x_grid;
      Real s = 0;
      for (const auto& term : f.terms)
        s += dirichlet_harmonic_sum(term, a, xi, q);
      if (abs(s) > worst) worst = abs(s);
    }
    SumRow row;
    row.t = q;
    row.s = worst;
    row.bound = Real(threshold);
    row.pass = worst <= Real(threshold);
    trace.rows.push_back(std::move(row));
  }
  Real first = trace.rows.front().s;
  Real min_rest = first;
  for (size_t i = 1; i < trace.rows.size(); ++i)
    min_rest = std::min(min_rest, trace.rows[i].s);
  trace.all_pass = trace.rows.back().pass && min_rest <= first;
  return trace;
}

IntegralBoundResult integral_bound_probe(
    const TrigSeriesFunction& f,
    const std::vector<std::pair<double, double>>& box, long long t,
    int quad_points, const PrecisionContext& ctx) {
  ctx.validate();
  if (static_cast<int>(box.size()) != f.dim)
    throw DomainError("integral_bound_probe: box/series dimension mismatch");
  if (f.dim > 3)
    throw DomainError("integral_bound_probe: dimensions above 3 unsupported");
  if (t < 1) throw DomainError("integral_bound_probe: t must be >= 1");
  require_box(box);
  require_harmonic_kinds(f, "integral_bound_probe");
  require_zero_mean(f, ctx, "integral_bound_probe");

  auto g = [&](const std::vector<double>& x) { return dilate_sum(f, x, t); };
  const QuadOut q = simpson_box(g, box, std::max(4, quad_points));
  IntegralBoundResult res;
  res.t = t;
  res.value = q.value;
  res.points_used = q.points;
  res.m_sup = sup_on_grid(f, dense_grid_for(f.dim));
  res.bound = res.m_sup * f.dim * (1 + std::log(static_cast<double>(t)));
  res.pass = std::abs(res.value) <= res.bound + 1e-3;
  return res;
}

IntegralBoundResult rational_window_bound_probe(const TrigSeriesFunction& f,
                                                long long a, long long q,
                                                long long t,
                                                const PrecisionContext& ctx) {
  ctx.validate();
  if (f.dim != 1)
    throw DomainError("rational_window_bound_probe: one-dimensional only");
  if (q < 1 || a < 0 || a >= q)
    throw BadWindow("rational_window_bound_probe: need 0 <= a < q");
  if (std::gcd(a, q) != 1 || std::gcd(a + 1, q) != 1)
    throw BadWindow("rational_window_bound_probe: gcd(a,q) and gcd(a+1,q) must be 1");
  if (t < 1) throw DomainError("rational_window_bound_probe: t must be >= 1");
  require_harmonic_kinds(f, "rational_window_bound_probe");
  require_zero_mean(f, ctx, "rational_window_bound_probe");

  auto g = [&](const std::vector<double>& x) { return dilate_sum(f, x, t); };
  const std::vector<std::pair<double, double>> box = {
      {double(a) / q, double(a + 1) / q}};
  const QuadOut out = simpson_box(g, box, 64);
  IntegralBoundResult res;
  res.t = t;
  res.value = out.value;
  res.points_used = out.points;
  res.m_sup = sup_on_grid(f, dense_grid_for(1));
  res.bound = res.m_sup * (q - 1);
  res.pass = std::abs(res.value) <= res.bound + 1e-3;
  return res;
}

SpecialTimesReport special_times_probe(const TrigSeriesFunction& f,
                                       const DecaySpec& spec,
                                       const RealVector& alpha, long long Q,
                                       int x_grid,
                                       const PrecisionContext& ctx) {
  ctx.validate();
  const int n = f.dim;
  if (alpha.dim() != n)
    throw DomainError("special_times_probe: dimension mismatch");
  if (Q < 1) throw DomainError("special_times_probe: Q must be >= 1");
  if (x_grid < 2) throw DomainError("special_times_probe: x_grid too small");
  require_harmonic_kinds(f, "special_times_probe");
  double grid_total = 1;
  for (int j = 0; j < n; ++j) grid_total *= x_grid;
  if (grid_total > double(1) * (1 << 22))
    throw BudgetExceeded("special_times_probe: x grid too large");
  for (const auto& term : f.terms) {
    long long maxm = 0;
    for (long long mj : term.freq) maxm = std::max(maxm, std::llabs(mj));
    if (maxm == 0)
      throw DomainError("special_times_probe: constant term present");
    const double envelope = spec.C * std::pow(double(maxm), -spec.gamma);
    if (static_cast<double>(abs(term.coeff)) > envelope * (1 + 1e-9))
      throw DomainError("special_times_probe: series violates the envelope");
  }

  const SimultaneousList sa = simultaneous_best(alpha, Q, ctx);
  const BestApproxList ba =
      n == 1 ? cf_best_approximations(alpha, 10000, ctx)
             : enumerate_best_approximations(alpha, std::min<long long>(Q, 10000),
                                             ctx);
  const ExponentEstimate est = estimate_exponents(ba, sa);

  SpecialTimesReport rep;
  rep.q_cap = Q;
  rep.t_star = sa.records.back().q;
  rep.r_star = static_cast<double>(sa.records.back().r);
  rep.lambda_hat = est.lambda_hat_est;
  rep.omega_hat = est.omega_hat_est;
  rep.warn_gamma = !(spec.gamma > n + est.omega_hat_est / est.lambda_hat_est);

  const double qd = static_cast<double>(Q);
  double best_bound = 0;
  for (long long nu = 1; nu + 1 <= ba.depth(); ++nu) {
    const double zeta =
        static_cast<double>(ba.records[static_cast<size_t>(nu - 1)].zeta);
    const double m_next = static_cast<double>(
        ba.records[static_cast<size_t>(nu)].height);
    const double b = std::pow(qd, -rep.lambda_hat + rep.delta) / zeta +
                     qd * std::pow(m_next, n - spec.gamma);
    if (rep.nu_opt == 0 || b < best_bound) {
      best_bound = b;
      rep.nu_opt = nu;
    }
  }
  rep.bound = best_bound;

  // Sup of |S^{t*}| over the uniform grid, accumulating each harmonic's
  // closed form through a shared root-of-unity table.
  const std::vector<double> ad = render_double(alpha);
  const long long t = rep.t_star;
  const int G = x_grid;
  std::vector<double> root_c(G), root_s(G);
  for (int i = 0; i < G; ++i) {
    root_c[i] = std::cos(2 * kPi * i / G);
    root_s[i] = std::sin(2 * kPi * i / G);
  }
  const long long total = static_cast<long long>(grid_total);
  std::vector<double> s_grid(static_cast<size_t>(total), 0.0);
  std::vector<long long> stride(n);
  for (const auto& term : f.terms) {
    double ma = 0;
    for (int j = 0; j < n; ++j) ma += term.freq[j] * ad[j];
    const PQ pq = dirichlet_pq(static_cast<double>(term.coeff), term.kind,
                               static_cast<double>(term.phase), frac_d(ma), t, 0);
    for (int j = 0; j < n; ++j)
      stride[j] = ((term.freq[j] % G) + G) % G;
    std::vector<long long> idx(n, 0);
    long long phase_idx = 0;
    for (long long flat = 0; flat < total; ++flat) {
      s_grid[static_cast<size_t>(flat)] +=
          pq.p * root_c[phase_idx] + pq.q * root_s[phase_idx];
      int j = 0;
      for (; j < n; ++j) {
        phase_idx = (phase_idx + stride[j]) % G;
        if (++idx[j] < G) break;
        idx[j] = 0;
        // rolled over: strip this dimension's full contribution (G*stride = 0 mod G)
      }
      if (j == n) break;
    }
  }
  long long best_flat = 0;
  double observed = 0;
  for (long long flat = 0; flat < total; ++flat) {
    const double v = std::abs(s_grid[static_cast<size_t>(flat)]);
    if (v > observed) {
      observed = v;
      best_flat = flat;
    }
  }
  // One refinement pass around the best cell.
  std::vector<double> centre(n);
  long long rem = best_flat;
  for (int j = 0; j < n; ++j) {
    centre[j] = double(rem % G) / G;
    rem /= G;
  }
  std::vector<long long> idx(n, 0);
  const int R = 17;
  std::vector<double> x(n);
  bool done = false;
  while (!done) {
    for (int j = 0; j < n; ++j)
      x[j] = centre[j] + (double(idx[j]) / (R - 1) * 2 - 1) / G;
    double v = 0;
    for (const auto& term : f.terms) {
      double ma = 0, mx = 0;
      for (int j = 0; j < n; ++j) {
        ma += term.freq[j] * ad[j];
        mx += term.freq[j] * x[j];
      }
      const PQ pq = dirichlet_pq(static_cast<double>(term.coeff), term.kind,
                                 static_cast<double>(term.phase), frac_d(ma),
                                 t, 0);
      const double u = 2 * kPi * frac_d(mx);
      v += pq.p * std::cos(u) + pq.q * std::sin(u);
    }
    observed = std::max(observed, std::abs(v));
    int j = 0;
    for (; j < n; ++j) {
      if (++idx[j] < R) break;
      idx[j] = 0;
    }
    done = j == n;
  }
  rep.observed = observed;
  rep.pass = observed <= 10 * rep.bound;
  return rep;
}

double phi_value(const PhiSpec& phi, double t) {
  if (t < 1) throw DomainError("phi_value: t must be >= 1");
  return std::pow(std::log(t + 1), phi.log_power) *
         std::pow(std::log(std::log(t) + 2), phi.loglog_power);
}

namespace {

double simpson_line(const std::function<double(double)>& g, double a, double b,
                    int panels) {
  const double h = (b - a) / (2 * panels);
  double acc = g(a) + g(b);
  for (int i = 1; i < 2 * panels; ++i)
    acc += g(a + i * h) * (i % 2 ? 4 : 2);
  return acc * h / 3;
}

// Numeric admissibility of integral dt/(t Phi): dyadic blocks to 1e8, then
// the limiting block ratio computed in the variable where Phi's leading
// power acts (w = log t, or v = log log t + 2 when the log power is 1).
struct PhiTail {
  double integral_1e8 = 0;
  double ratio = 0;
  bool admissible = false;
};

PhiTail phi_tail_test(const PhiSpec& phi) {
  PhiTail out;
  auto integrand = [&](double t) { return 1 / (t * phi_value(phi, t)); };
  double prev_block = 0;
  bool monotone = true;
  for (int j = 1; j <= 26; ++j) {
    const double block =
        simpson_line(integrand, std::pow(2.0, j), std::pow(2.0, j + 1), 64);
    out.integral_1e8 += block;
    if (j >= 6 && block > prev_block * (1 + 1e-12)) monotone = false;
    prev_block = block;
  }

  const double p = phi.log_power;
  const double e = phi.loglog_power;
  std::function<double(double)> h;
  double v0;
  if (std::abs(p - 1) <= 1e-9) {
    // v = log log t + 2: residual integrand v^{-e} (the log1p correction at
    // t >= 1e8 is below 1e-8 relative and cannot move the ratio).
    h = [e](double v) { return std::pow(v, -e); };
    v0 = std::log(std::log(1e8)) + 2;
  } else {
    // w = log t: integrand w^{-p} (log w + 2)^{-e}.
    h = [p, e](double w) {
      return std::pow(w, -p) * std::pow(std::log(w) + 2, -e);
    };
    v0 = std::log(1e8);
  }
  double prev = simpson_line(h, v0, 2 * v0, 32);
  double ratio = 1;
  for (int i = 1; i <= 30; ++i) {
    const double cur =
        simpson_line(h, v0 * std::pow(2.0, i), v0 * std::pow(2.0, i + 1), 32);
    ratio = cur / prev;
    prev = cur;
  }
  out.ratio = ratio;
  out.admissible = monotone && std::isfinite(ratio) && ratio <= 0.999;
  return out;
}

}  // namespace

std::vector<RealVector> seeded_alpha_samples(int count, std::uint64_t seed) {
  if (count < 1) throw SeedInvalid("seeded_alpha_samples: count must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<RealVector> out;
  out.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    double u = double(rng() >> 11) * 0x1p-53;
    if (u <= 1e-9 || u >= 1 - 1e-9) u = 0.5;
    char buf[40];
    std::snprintf(buf, sizeof buf, "dec:%.17f", u);
    out.push_back(parse_alpha(buf));
  }
  return out;
}

ColzaniReport colzani_probe(const TrigSeriesFunction& f,
                            const std::vector<RealVector>& alpha_samples,
                            const PhiSpec& phi, long long t_max, int x_grid,
                            const PrecisionContext& ctx) {
  ctx.validate();
  if (f.dim != 1) throw DomainError("colzani_probe: one-dimensional only");
  require_harmonic_kinds(f, "colzani_probe");
  if (alpha_samples.empty())
    throw DomainError("colzani_probe: need at least one sample");
  if (t_max < 4) throw DomainError("colzani_probe: t_max must be >= 4");
  if (x_grid < 2) throw DomainError("colzani_probe: x_grid too small");

  const PhiTail tail = phi_tail_test(phi);
  if (!tail.admissible)
    throw PhiInadmissible(
        "colzani_probe: integral dt/(t Phi) diverges numerically "
        "(limit block ratio " + std::to_string(tail.ratio) + ")");

  ColzaniReport rep;
  rep.phi = phi;
  rep.t_max = t_max;
  rep.x_grid = x_grid;
  rep.integral_1e8 = tail.integral_1e8;
  rep.tail_block_ratio = tail.ratio;

  const int G = x_grid;
  const size_t nt = f.terms.size();
  std::vector<double> root_c(G), root_s(G);
  for (int i = 0; i < G; ++i) {
    root_c[i] = std::cos(2 * kPi * i / G);
    root_s[i] = std::sin(2 * kPi * i / G);
  }
  // Per-term grid tables cos/sin(2 pi m x_i): strides through the root table.
  std::vector<std::vector<double>> tc(nt), ts(nt);
  std::vector<double> coeff(nt), phase(nt);
  std::vector<bool> is_cos(nt);
  for (size_t j = 0; j < nt; ++j) {
    const auto& term = f.terms[j];
    const long long stride = ((term.freq[0] % G) + G) % G;
    tc[j].resize(G);
    ts[j].resize(G);
    long long idx = 0;
    for (int i = 0; i < G; ++i) {
      tc[j][i] = root_c[idx];
      ts[j][i] = root_s[idx];
      idx = (idx + stride) % G;
    }
    coeff[j] = static_cast<double>(term.coeff);
    phase[j] = static_cast<double>(term.phase);
    is_cos[j] = term.kind == TermKind::cos;
  }
  std::vector<double> phi_at(static_cast<size_t>(t_max) + 1, 1.0);
  for (long long t = 1; t <= t_max; ++t)
    phi_at[static_cast<size_t>(t)] = phi_value(phi, static_cast<double>(t));

  const long long t_half = t_max / 2;
  std::vector<double> s_of_x(static_cast<size_t>(G));
  int unstable = 0;
  for (size_t ai = 0; ai < alpha_samples.size(); ++ai) {
    const double a = render_double(alpha_samples[ai])[0];
    // Per-term rotation state for sin(pi t theta) and psi_t.
    std::vector<double> cp(nt), sp(nt);   // cos/sin(pi theta)
    std::vector<double> cn(nt), sn(nt);   // cos/sin(pi t theta)
    std::vector<double> cq(nt), sq(nt);   // cos/sin(psi_t), psi_t = phase + pi(t-1)theta
    std::vector<bool> degenerate(nt);
    for (size_t j = 0; j < nt; ++j) {
      const double theta = frac_d(f.terms[j].freq[0] * a);
      cp[j] = std::cos(kPi * theta);
      sp[j] = std::sin(kPi * theta);
      cn[j] = cp[j];
      sn[j] = sp[j];
      cq[j] = std::cos(phase[j]);
      sq[j] = std::sin(phase[j]);
      degenerate[j] = std::abs(sp[j]) < 1e-300;
    }
    double c_emp = 0, c_half = 0;
    for (long long t = 1; t <= t_max; ++t) {
      std::fill(s_of_x.begin(), s_of_x.end(), 0.0);
      for (size_t j = 0; j < nt; ++j) {
        const double ratio =
            degenerate[j] ? static_cast<double>(t) : sn[j] / sp[j];
        double p, q;
        if (is_cos[j]) {
          p = coeff[j] * ratio * cq[j];
          q = -coeff[j] * ratio * sq[j];
        } else {
          p = coeff[j] * ratio * sq[j];
          q = coeff[j] * ratio * cq[j];
        }
        const double* tcj = tc[j].data();
        const double* tsj = ts[j].data();
        double* s = s_of_x.data();
        for (int i = 0; i < G; ++i) s[i] += p * tcj[i] + q * tsj[i];
        // Advance sin(pi t theta) and psi by pi*theta.
        const double sn2 = sn[j] * cp[j] + cn[j] * sp[j];
        const double cn2 = cn[j] * cp[j] - sn[j] * sp[j];
        sn[j] = sn2;
        cn[j] = cn2;
        const double sq2 = sq[j] * cp[j] + cq[j] * sp[j];
        const double cq2 = cq[j] * cp[j] - sq[j] * sp[j];
        sq[j] = sq2;
        cq[j] = cq2;
        if ((t & 1023) == 0) {
          const double rn = 1 / std::hypot(sn[j], cn[j]);
          sn[j] *= rn;
          cn[j] *= rn;
          const double rq = 1 / std::hypot(sq[j], cq[j]);
          sq[j] *= rq;
          cq[j] *= rq;
        }
      }
      double worst = 0;
      for (int i = 0; i < G; ++i) worst = std::max(worst, std::abs(s_of_x[i]));
      c_emp = std::max(c_emp, worst / phi_at[static_cast<size_t>(t)]);
      if (t == t_half) c_half = c_emp;
    }
    ColzaniRow row;
    row.index = static_cast<int>(ai);
    row.c_emp = c_emp;
    row.c_half = c_half;
    row.stable = c_emp <= 1.25 * c_half * (1 + 1e-12);
    rep.all_finite = rep.all_finite && std::isfinite(c_emp);
    if (!row.stable) ++unstable;
    rep.rows.push_back(row);
  }
  rep.unstable_fraction =
      static_cast<double>(unstable) / static_cast<double>(alpha_samples.size());
  return rep;
}

}  // namespace kron
