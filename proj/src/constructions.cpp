#include "kron/constructions.hpp"

#include <algorithm>
#include <cmath>

namespace kron {

namespace {

Real two_pow_neg(int k) { return ldexp(Real(1), -k); }

const BestApproximation& record_at(const BestApproxList& ba, long long nu) {
  if (nu < 1 || nu > ba.depth())
    throw OutOfRange("record index " + std::to_string(nu) + " of " +
                     std::to_string(ba.depth()));
  return ba.records[static_cast<size_t>(nu - 1)];
}

// floor(1/(2 zeta)), saturated well below the integer overflow line.
long long half_inverse(const Real& zeta) {
  const Real inv = 1 / (2 * zeta);
  if (inv > Real(4e18)) return 4000000000000000000LL;
  return static_cast<long long>(floor(inv));
}

// Reduced fractional part of m . x built coordinate-by-coordinate so that
// huge components never meet full-width products.
Real frac_dot(const std::vector<long long>& m, const std::vector<Real>& x,
              unsigned bits) {
  Real acc = 0;
  for (size_t j = 0; j < m.size(); ++j) {
    if (m[j] == 0) continue;
    acc += frac_int_mul(Int(m[j]), x[j], bits);
  }
  return frac(acc);
}

double observed_decay_ratio(const Real& last, const Real& prev) {
  double r = static_cast<double>(last / prev);
  if (!(r > 0)) r = 0.5;
  return std::min(r, 0.9);
}

}  // namespace

Real SigmaSequence::value(long long t) const {
  if (t < 0) throw DomainError("sigma: t must be >= 0");
  switch (form) {
    case Form::power:
      return pow(Real(t) + 2, Real(-p));
    case Form::log_inv:
      return 1 / log(Real(t) + exp(Real(1)));
    case Form::table: {
      if (table.empty()) throw DomainError("sigma: empty table");
      const size_t i = std::min<size_t>(static_cast<size_t>(t), table.size() - 1);
      return Real(table[i]);
    }
  }
  throw DomainError("sigma: unknown form");
}

void SigmaSequence::validate() const {
  if (form == Form::power && !(p > 0))
    throw DomainError("sigma: power exponent must be positive");
  PrecisionGuard guard(64);
  Real prev = value(0);
  if (!(prev > 0)) throw DomainError("sigma: sigma_0 must be positive");
  Real first = prev;
  Real last = prev;
  for (long long t = 1; t <= 1000000; t *= 2) {
    const Real s = value(t);
    if (!(s > 0)) throw DomainError("sigma: must stay positive");
    if (!(s < prev))
      throw DomainError("sigma: must decrease strictly (fails near t=" +
                        std::to_string(t) + ")");
    prev = s;
    last = s;
  }
  if (!(last < first / 2))
    throw DomainError("sigma: does not appear to decrease to zero");
}

std::string SigmaSequence::describe() const {
  switch (form) {
    case Form::power:
      return "power:" + std::to_string(p);
    case Form::log_inv:
      return "log_inv";
    case Form::table:
      return "table[" + std::to_string(table.size()) + "]";
  }
  return "?";
}

SigmaSequence sigma_power(double p) {
  SigmaSequence s;
  s.form = SigmaSequence::Form::power;
  s.p = p;
  return s;
}

SigmaSequence sigma_log_inv() {
  SigmaSequence s;
  s.form = SigmaSequence::Form::log_inv;
  return s;
}

KocherginConstruction build_kochergin(const RealVector& alpha,
                                      const BestApproxList& ba,
                                      const SigmaSequence& sigma, int k_max,
                                      const PrecisionContext& ctx) {
  ctx.validate();
  sigma.validate();
  if (k_max < 1)
    throw EmptyConstruction("build_kochergin: k_max must be >= 1");
  if (alpha.dim() != ba.dim)
    throw DomainError("build_kochergin: alpha/record dimension mismatch");

  PrecisionGuard guard(ctx.bits + 32);
  KocherginConstruction c;
  c.alpha = alpha;
  c.ba = ba;
  c.sigma = sigma;
  c.k_max = k_max;

  long long prev_r = 0;
  long long idx = 1;
  for (int k = 1; k <= k_max; ++k) {
    bool found = false;
    for (; idx <= ba.depth(); ++idx) {
      const BestApproximation& rec = record_at(ba, idx);
      const long long r = half_inverse(rec.zeta);
      if (r <= prev_r) continue;
      if (sigma.value(r) <= two_pow_neg(k)) {
        c.chosen.push_back({k, idx, r});
        prev_r = r;
        ++idx;
        found = true;
        break;
      }
    }
    if (!found)
      throw DepthExceeded(
          "build_kochergin: no admissible record for layer " +
          std::to_string(k) + " within depth " + std::to_string(ba.depth()) +
          "; extend the approximation list beyond height " +
          std::to_string(ba.records.empty() ? 0 : ba.records.back().height));
  }
  c.t0 = c.chosen.front().r;
  return c;
}

SeriesValue kochergin_sum(const KocherginConstruction& c, long long t,
                          const PrecisionContext& ctx) {
  ctx.validate();
  if (t < 0) throw DomainError("kochergin_sum: t must be >= 0");
  PrecisionGuard guard(ctx.bits + 32);
  const Real pi = pi_value();
  Real acc = 0;
  for (const KocherginLevel& lev : c.chosen) {
    const BestApproximation& rec = record_at(c.ba, lev.nu);
    const Real u = frac(Real(t) * rec.delta);
    acc += two_pow_neg(lev.k) * abs(sin(pi * u)) / rec.zeta;
  }
  return {acc, pi * t * two_pow_neg(c.k_max)};
}

SeriesValue kochergin_f_eval(const KocherginConstruction& c,
                             const std::vector<Real>& x,
                             const PrecisionContext& ctx) {
  ctx.validate();
  if (static_cast<int>(x.size()) != c.alpha.dim())
    throw DomainError("kochergin_f_eval: dimension mismatch");
  PrecisionGuard guard(ctx.bits + 32);
  const Real pi = pi_value();
  Real acc = 0;
  for (const KocherginLevel& lev : c.chosen) {
    const BestApproximation& rec = record_at(c.ba, lev.nu);
    const Real u = frac_dot(rec.m, x, ctx.bits + 32);
    const Real shifted = sin(pi * frac(u + rec.delta));
    const Real base = sin(pi * u);
    acc += two_pow_neg(lev.k) * (abs(shifted) - abs(base)) / rec.zeta;
  }
  return {acc, pi * two_pow_neg(c.k_max)};
}

TrigSeriesFunction kochergin_f_series(const KocherginConstruction& c,
                                      const PrecisionContext& ctx) {
  ctx.validate();
  PrecisionGuard guard(ctx.bits + 32);
  const Real pi = pi_value();
  TrigSeriesFunction f;
  f.dim = c.alpha.dim();
  f.label = "layered_abs_sin(" + c.alpha.spec_string + ", k_max=" +
            std::to_string(c.k_max) + ")";
  for (const KocherginLevel& lev : c.chosen) {
    const BestApproximation& rec = record_at(c.ba, lev.nu);
    const Real w = two_pow_neg(lev.k) / rec.zeta;
    TrigTerm shifted;
    shifted.coeff = w;
    shifted.freq = rec.m;
    shifted.phase = pi * rec.delta;
    shifted.kind = TermKind::abs_sin;
    f.terms.push_back(std::move(shifted));
    TrigTerm base;
    base.coeff = -w;
    base.freq = rec.m;
    base.phase = 0;
    base.kind = TermKind::abs_sin;
    f.terms.push_back(std::move(base));
  }
  f.tail_sup = pi * two_pow_neg(c.k_max);
  return f;
}

GrowthReport certify_growth(const KocherginConstruction& c, long long t_from,
                            long long t_to, const PrecisionContext& ctx) {
  ctx.validate();
  if (c.chosen.empty()) throw EmptyConstruction("certify_growth: no layers");
  const long long r_last = c.chosen.back().r;
  if (t_from < c.t0 || t_to > r_last || t_from > t_to)
    throw RangeError("certify_growth: [" + std::to_string(t_from) + ", " +
                     std::to_string(t_to) + "] outside the guaranteed window [" +
                     std::to_string(c.t0) + ", " + std::to_string(r_last) + "]");
  PrecisionGuard guard(ctx.bits + 32);
  const Real slack = Real(2) * ctx.tol;
  GrowthReport rep;
  rep.rows.reserve(static_cast<size_t>(t_to - t_from + 1));
  for (long long t = t_from; t <= t_to; ++t) {
    const SeriesValue sv = kochergin_sum(c, t, ctx);
    GrowthRow row;
    row.t = t;
    row.value = sv.value;
    row.tail = sv.tail;
    row.sigma_t = c.sigma.value(t);
    row.bound_weak = Real(t) * row.sigma_t;
    row.bound_two = 2 * row.bound_weak;
    row.pass_weak = row.value >= row.bound_weak - slack;
    row.pass_two = row.value + row.tail >= row.bound_two - slack;
    rep.all_pass_weak = rep.all_pass_weak && row.pass_weak;
    rep.all_pass_two = rep.all_pass_two && row.pass_two;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

SmoothConstruction build_smooth(const RealVector& alpha,
                                const BestApproxList& ba, const Real& d,
                                int n_terms, const PrecisionContext& ctx) {
  ctx.validate();
  if (!(d >= 1)) throw DomainError("build_smooth: d must be >= 1");
  if (n_terms < 1) throw DomainError("build_smooth: n_terms must be >= 1");
  if (ba.depth() < n_terms)
    throw InsufficientDepth("build_smooth: need " + std::to_string(n_terms) +
                            " records, have " + std::to_string(ba.depth()));
  if (alpha.dim() != ba.dim)
    throw DomainError("build_smooth: alpha/record dimension mismatch");

  PrecisionGuard guard(ctx.bits + 32);
  const Real pi = pi_value();
  SmoothConstruction s;
  s.alpha = alpha;
  s.ba = ba;
  s.d = d;
  s.n_terms = n_terms;
  s.series.dim = alpha.dim();
  s.series.label = "smooth_layers(" + alpha.spec_string + ", d=" +
                   std::to_string(static_cast<double>(d)) + ", N=" +
                   std::to_string(n_terms) + ")";
  for (long long nu = 1; nu <= n_terms; ++nu) {
    const BestApproximation& rec = record_at(ba, nu);
    TrigTerm term;
    term.coeff = pow(Real(rec.height), -d) * sin(pi * rec.zeta) / rec.zeta;
    term.freq = rec.m;
    if (rec.delta < 0)
      for (long long& mj : term.freq) mj = -mj;
    term.phase = pi * rec.zeta;
    term.kind = TermKind::sin;
    s.series.terms.push_back(std::move(term));
  }
  // Sup bound on the unrealized layers: pi M^{-d} per layer over the known
  // records, closed geometrically past the list (record heights grow at least
  // Fibonacci-fast, so the last observed ratio bounds the later ones).
  Real tail = 0;
  for (long long nu = n_terms + 1; nu <= ba.depth(); ++nu)
    tail += pi * pow(Real(record_at(ba, nu).height), -d);
  if (ba.depth() >= 2) {
    const Real last = pow(Real(record_at(ba, ba.depth()).height), -d);
    const Real prev = pow(Real(record_at(ba, ba.depth() - 1).height), -d);
    const double r = observed_decay_ratio(last, prev);
    tail += pi * last * r / (1 - r);
  }
  s.series.tail_sup = tail;

  SimultaneousList sa;
  if (ba.dim == 1) {
    // In one dimension the simultaneous records are the same denominators.
    sa.dim = 1;
    sa.q_max = ba.search_bound;
    sa.alpha_spec = ba.alpha_spec;
    for (const BestApproximation& rec : ba.records)
      sa.records.push_back({rec.nu, rec.height, rec.zeta});
  } else {
    sa = simultaneous_best(alpha, std::min<long long>(ba.search_bound, 10000),
                           ctx);
  }
  const ExponentEstimate est = estimate_exponents(ba, sa);
  s.margin = 2 * est.omega_hat_est - est.omega_est - static_cast<double>(d);
  return s;
}

SeriesValue smooth_orbit_sum(const SmoothConstruction& s, long long t,
                             const PrecisionContext& ctx) {
  ctx.validate();
  if (t < 0) throw DomainError("smooth_orbit_sum: t must be >= 0");
  PrecisionGuard guard(ctx.bits + 32);
  const Real pi = pi_value();
  Real acc = 0;
  for (long long nu = 1; nu <= s.n_terms; ++nu) {
    const BestApproximation& rec = record_at(s.ba, nu);
    const Real sn = sin(pi * frac(Real(t) * rec.delta));
    acc += pow(Real(rec.height), -s.d) * sn * sn / rec.zeta;
  }
  // Unrealized layers: sin^2(pi t delta) <= min(1, (pi t zeta)^2).
  Real tail = 0;
  for (long long nu = s.n_terms + 1; nu <= s.ba.depth(); ++nu) {
    const BestApproximation& rec = record_at(s.ba, nu);
    const Real quad = pow(pi * t * rec.zeta, 2);
    const Real cap = quad < 1 ? quad : Real(1);
    tail += pow(Real(rec.height), -s.d) / rec.zeta * cap;
  }
  if (s.ba.depth() >= 2 && t > 0) {
    const BestApproximation& last = record_at(s.ba, s.ba.depth());
    const BestApproximation& prev = record_at(s.ba, s.ba.depth() - 1);
    const Real c_last = pow(Real(last.height), -s.d) * last.zeta;
    const Real c_prev = pow(Real(prev.height), -s.d) * prev.zeta;
    const double r = observed_decay_ratio(c_last, c_prev);
    tail += pow(Real(pi) * t, 2) * c_last * r / (1 - r);
  }
  return {acc, tail};
}

SmoothGrowthReport certify_smooth_growth(const SmoothConstruction& s,
                                         long long t_max,
                                         const PrecisionContext& ctx) {
  ctx.validate();
  if (t_max < 1) throw DomainError("certify_smooth_growth: t_max must be >= 1");
  PrecisionGuard guard(ctx.bits + 32);

  std::vector<Real> boundary(s.n_terms + 1);  // boundary[nu] = 1/(2 zeta_nu)
  for (long long nu = 1; nu <= s.n_terms; ++nu)
    boundary[nu] = 1 / (2 * record_at(s.ba, nu).zeta);
  if (!(Real(t_max) < boundary[s.n_terms]))
    throw RangeError(
        "certify_smooth_growth: t_max reaches past the last realized layer "
        "window; increase n_terms");

  SmoothGrowthReport rep;
  long long nu = 1;
  while (nu < s.n_terms && !(Real(1) < boundary[nu])) ++nu;

  const Real point99 = Real(99) / 100;
  SmoothWindowRow row;
  auto open_window = [&](long long nu_now, long long t_first) {
    row = SmoothWindowRow();
    row.nu = nu_now;
    row.t_first = t_first;
    const Real left = (nu_now == 1) ? Real(1) : boundary[nu_now - 1];
    const Real left_clipped = left < 1 ? Real(1) : left;
    const BestApproximation& rec = record_at(s.ba, nu_now);
    row.prediction =
        rec.zeta * pow(2 * left_clipped, 2) * pow(Real(rec.height), -s.d);
  };
  auto close_window = [&](long long t_last) {
    row.t_last = t_last;
    row.pass = row.min_value >= row.prediction * point99;
    rep.all_pass = rep.all_pass && row.pass;
    rep.rows.push_back(row);
  };

  open_window(nu, 1);
  bool global_set = false;
  bool window_set = false;
  for (long long t = 1; t <= t_max; ++t) {
    while (Real(t) >= boundary[nu]) {
      if (window_set) close_window(t - 1);
      ++nu;
      open_window(nu, t);
      window_set = false;
    }
    const SeriesValue sv = smooth_orbit_sum(s, t, ctx);
    const Real low = sv.value - sv.tail;
    if (!window_set || low < row.min_value) {
      row.min_value = low;
      row.argmin_t = t;
      window_set = true;
    }
    if (!global_set || low < rep.min_over_range) {
      rep.min_over_range = low;
      global_set = true;
    }
  }
  if (window_set) close_window(t_max);
  return rep;
}

}  // namespace kron
