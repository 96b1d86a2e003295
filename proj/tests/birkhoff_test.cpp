#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <random>
#include <vector>

#include "kron/birkhoff.hpp"

using namespace kron;

namespace {

PrecisionContext ctx256() {
  PrecisionContext ctx;
  ctx.bits = 256;
  ctx.tol = 1e-30;
  return ctx;
}

TrigTerm term(double coeff, std::vector<long long> freq, double phase,
              TermKind kind) {
  TrigTerm t;
  t.coeff = coeff;
  t.freq = std::move(freq);
  t.phase = phase;
  t.kind = kind;
  return t;
}

RealVector decimal_alpha(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "dec:%.17f", v);
  return parse_alpha(buf);
}

}  // namespace

TEST_CASE("decay realization enumerates canonical frequencies") {
  PrecisionGuard guard(128);  // coefficients are cut at ambient precision
  const TrigSeriesFunction f1 = realize_decay(DecaySpec{1.0, 2.0}, 1, 3);
  REQUIRE(f1.terms.size() == 3);
  CHECK(f1.terms[0].freq == std::vector<long long>{1});
  CHECK(f1.terms[1].freq == std::vector<long long>{2});
  CHECK(f1.terms[2].freq == std::vector<long long>{3});
  CHECK(abs(f1.terms[1].coeff - Real("0.25")) <= Real("1e-30"));
  CHECK(abs(f1.terms[2].coeff - Real(1) / 9) <= Real("1e-30"));

  const TrigSeriesFunction f2 = realize_decay(DecaySpec{1.0, 2.0}, 2, 1);
  REQUIRE(f2.terms.size() == 4);
  CHECK(f2.terms[0].freq == std::vector<long long>({0, 1}));
  CHECK(f2.terms[1].freq == std::vector<long long>({1, -1}));
  CHECK(f2.terms[2].freq == std::vector<long long>({1, 0}));
  CHECK(f2.terms[3].freq == std::vector<long long>({1, 1}));
  for (const auto& tt : f2.terms) CHECK(tt.kind == TermKind::cos);
  CHECK_THROWS_AS(realize_decay(DecaySpec{0.0, 2.0}, 1, 3), DomainError);
  CHECK_THROWS_AS(realize_decay(DecaySpec{1.0, 2.0}, 4, 3), DomainError);
}

TEST_CASE("orbit sums match the circle-geometric closed form") {
  const auto ctx = ctx256();
  PrecisionGuard guard(ctx);
  const RealVector alpha = alpha_sqrt(2);
  const Real a = alpha.render(ctx.bits)[0];

  TrigSeriesFunction f;
  f.dim = 1;
  f.terms = {term(0.7, {3}, 0.4, TermKind::sin)};
  for (long long t : {1LL, 7LL, 100LL, 999LL}) {
    const Real via_engine =
        birkhoff_sum(f, alpha, {Real("0.3")}, t, ctx).value;
    const Real closed = dirichlet_harmonic_sum(f.terms[0], a, Real("0.3"), t);
    CHECK(abs(via_engine - closed) <= Real("1e-50"));
  }
}

TEST_CASE("randomized closed-form cross-check") {
  const auto ctx = ctx256();
  PrecisionGuard guard(ctx);
  std::mt19937_64 rng(987654321);
  auto unit = [&] { return (rng() >> 11) * 0x1.0p-53; };
  for (int i = 0; i < 60; ++i) {
    const RealVector alpha = decimal_alpha(0.05 + 0.9 * unit());
    const Real a = alpha.render(ctx.bits)[0];
    TrigSeriesFunction f;
    f.dim = 1;
    const TermKind kind = (i % 2 == 0) ? TermKind::cos : TermKind::sin;
    f.terms = {term(unit() * 2 - 1, {1 + static_cast<long long>(rng() % 7)},
                    unit() * 6, kind)};
    const long long t = 1 + static_cast<long long>(rng() % 500);
    const Real x = Real(unit());
    const Real lhs = birkhoff_sum(f, alpha, {x}, t, ctx).value;
    const Real rhs = dirichlet_harmonic_sum(f.terms[0], a, x, t);
    CHECK(abs(lhs - rhs) <= Real("1e-45"));
  }
}

TEST_CASE("discrepancy: frozen small cases") {
  CHECK(discrepancy_1d(decimal_alpha(0.5), 2) == doctest::Approx(1.0).epsilon(1e-12));
  const double d1 = discrepancy_1d(alpha_sqrt(2), 1);
  const double d2 = discrepancy_1d(alpha_sqrt(2), 2);
  CHECK(d1 == doctest::Approx(2.0 - 1.4142135623730951).epsilon(1e-9));
  CHECK(d2 == doctest::Approx(2.0 * 1.4142135623730951 - 2.0).epsilon(1e-9));
  const double dg = discrepancy_1d(alpha_golden(), 1);
  CHECK(dg == doctest::Approx(0.6180339887498949).epsilon(1e-9));
  CHECK_THROWS_AS(discrepancy_1d(alpha_sqrt(2), 0), DomainError);
  CHECK_THROWS_AS(discrepancy_1d(parse_alpha("sqrt2,sqrt3"), 5), DomainError);
}

TEST_CASE("discrepancy dominates a counting-grid scan") {
  const long long t = 37;
  const double d = discrepancy_1d(alpha_sqrt(2), t);
  // Points {k sqrt2}, k = 1..t, against the grid lower bound.
  std::vector<double> pts;
  const double a = 1.4142135623730951;
  for (long long k = 1; k <= t; ++k) {
    double v = k * a;
    pts.push_back(v - std::floor(v));
  }
  std::sort(pts.begin(), pts.end());
  const int G = 100000;
  double grid_max = 0;
  for (int i = 0; i <= G; ++i) {
    const double x = static_cast<double>(i) / G;
    const auto cnt = std::lower_bound(pts.begin(), pts.end(), x) - pts.begin();
    grid_max = std::max(grid_max, std::abs(static_cast<double>(cnt) - t * x));
  }
  CHECK(d >= grid_max - 1e-9);
  CHECK(d <= grid_max + static_cast<double>(t + 1) / G + 1e-9);
}

TEST_CASE("total variation of reference kernels") {
  CHECK(total_variation(single_harmonic(1.0, 1, TermKind::cos)) ==
        doctest::Approx(4.0).epsilon(1e-6));
  CHECK(total_variation(single_harmonic(1.0, 2, TermKind::sin)) ==
        doctest::Approx(8.0).epsilon(1e-6));
  CHECK(total_variation(single_harmonic(-0.5, 1, TermKind::cos)) ==
        doctest::Approx(2.0).epsilon(1e-6));

  TrigSeriesFunction f;
  f.dim = 1;
  f.terms = {term(1.0, {1}, 0, TermKind::abs_sin)};
  CHECK(total_variation(f) == doctest::Approx(2.0).epsilon(1e-6));
  f.terms = {term(1.0, {1}, 0, TermKind::sin_sq)};
  CHECK(total_variation(f) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("total variation of a mixed series against a dense scan") {
  TrigSeriesFunction f;
  f.dim = 1;
  f.terms = {term(1.0, {1}, 0.3, TermKind::cos),
             term(0.4, {3}, 1.1, TermKind::sin),
             term(0.25, {2}, 0.2, TermKind::abs_sin)};
  const double v = total_variation(f);
  const int G = 2000000;
  double brute = 0, prev = 0;
  for (int i = 0; i <= G; ++i) {
    const double x = static_cast<double>(i) / G;
    const double pi = 3.14159265358979323846;
    const double y = std::cos(2 * pi * x + 0.3) +
                     0.4 * std::sin(2 * pi * 3 * x + 1.1) +
                     0.25 * std::abs(std::sin(pi * 2 * x + 0.2));
    if (i > 0) brute += std::abs(y - prev);
    prev = y;
  }
  CHECK(v >= brute - 1e-6);
  CHECK(v <= brute + 1e-3 * (1 + brute));
}

TEST_CASE("variation-discrepancy inequality holds along the orbit") {
  const auto ctx = ctx256();
  const SumTrace trace =
      koksma_probe(single_harmonic(1.0, 1, TermKind::cos), alpha_sqrt(2), 300, ctx);
  CHECK(trace.all_pass);
  CHECK(trace.rows.size() == 300);
  for (const auto& row : trace.rows) CHECK(row.pass);
  // Means must vanish for the inequality to make sense.
  TrigSeriesFunction constant;
  constant.dim = 1;
  constant.terms = {term(1.0, {0}, 0.2, TermKind::cos)};
  CHECK_THROWS_AS(koksma_probe(constant, alpha_sqrt(2), 10, ctx), DomainError);
}

TEST_CASE("ergodic averages settle at the largest probed time") {
  const auto ctx = ctx256();
  const std::vector<long long> times = {10, 100, 1000, 10000};
  const SumTrace trace =
      weyl_probe(single_harmonic(1.0, 1, TermKind::cos), alpha_sqrt(2),
                 {Real(0)}, times, ctx, 1e-2);
  REQUIRE(trace.rows.size() == 4);
  CHECK(trace.all_pass);  // judged on the last row
  CHECK(trace.rows.back().pass);
  CHECK(trace.rows.back().s <= trace.rows.front().s);
  CHECK_THROWS_AS(weyl_probe(single_harmonic(1.0, 1, TermKind::cos),
                             alpha_sqrt(2), {Real(0)}, {100, 10}, ctx, 1e-2),
                  DomainError);
}

TEST_CASE("convergent-time sums shrink like the residuals") {
  const auto ctx = ctx256();
  const std::vector<long long> qs = {1, 2, 5, 12, 29, 70, 169, 408};
  const SumTrace trace =
      sidorov_probe(single_harmonic(1.0, 1, TermKind::cos), alpha_sqrt(2), qs,
                    32, ctx, 0.05);
  REQUIRE(trace.rows.size() == qs.size());
  CHECK(trace.all_pass);
  // t = 1 row is sup over the grid of |f| = 1 (0 is a grid point).
  PrecisionGuard guard(ctx);
  CHECK(abs(trace.rows[0].s - 1) <= Real("1e-25"));
  CHECK(trace.rows.back().s < Real("0.01"));
}

TEST_CASE("boxed-integral bound: the three reference examples") {
  const auto ctx = ctx256();
  const TrigSeriesFunction c1 = single_harmonic(1.0, 1, TermKind::cos);

  const IntegralBoundResult full =
      integral_bound_probe(c1, {{0.0, 1.0}}, 7, 64, ctx);
  CHECK(full.pass);
  CHECK(std::abs(full.value) <= 1e-8);  // full period integrates to zero

  const IntegralBoundResult part =
      integral_bound_probe(c1, {{0.0, 0.3}}, 10, 64, ctx);
  CHECK(part.pass);
  CHECK(part.m_sup == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(part.bound == doctest::Approx(1.0 * (1.0 + std::log(10.0))).epsilon(1e-12));

  TrigSeriesFunction c2;
  c2.dim = 2;
  c2.terms = {term(1.0, {1, 1}, 0, TermKind::cos)};
  const IntegralBoundResult two =
      integral_bound_probe(c2, {{0.0, 0.3}, {0.0, 0.3}}, 10, 32, ctx);
  CHECK(two.pass);
  CHECK(two.bound == doctest::Approx(2.0 * (1.0 + std::log(10.0))).epsilon(1e-12));

  CHECK_THROWS_AS(integral_bound_probe(c1, {{0.2, 0.1}}, 10, 64, ctx),
                  DomainError);
}

TEST_CASE("rational window bound and its coprimality gate") {
  const auto ctx = ctx256();
  const TrigSeriesFunction c1 = single_harmonic(1.0, 1, TermKind::cos);
  for (long long t : {10LL, 100LL, 1000LL}) {
    const IntegralBoundResult r31 = rational_window_bound_probe(c1, 1, 3, t, ctx);
    CHECK(r31.pass);
    CHECK(r31.bound == doctest::Approx(2.0).epsilon(1e-12));
    const IntegralBoundResult r52 = rational_window_bound_probe(c1, 2, 5, t, ctx);
    CHECK(r52.pass);
    CHECK(r52.bound == doctest::Approx(4.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(rational_window_bound_probe(c1, 1, 4, 10, ctx), BadWindow);
  CHECK_THROWS_AS(rational_window_bound_probe(c1, 2, 4, 10, ctx), BadWindow);
  CHECK_THROWS_AS(rational_window_bound_probe(c1, 5, 3, 10, ctx), BadWindow);
}

TEST_CASE("special-times probe: bounded sups and envelope discipline") {
  const auto ctx = ctx256();
  const RealVector alpha = parse_alpha("sqrt2,sqrt3");
  const DecaySpec spec{1.0, 7.0};
  const TrigSeriesFunction f = realize_decay(spec, 2, 4);
  const SpecialTimesReport rep = special_times_probe(f, spec, alpha, 100, 64, ctx);
  CHECK(rep.pass);
  CHECK(rep.t_star >= 1);
  CHECK(rep.t_star <= 100);
  CHECK(rep.observed >= 0);
  CHECK(rep.bound > 0);
  CHECK(rep.r_star > 0);

  // A series violating the declared envelope is refused.
  TrigSeriesFunction bad = f;
  bad.terms[1].coeff = 10;
  CHECK_THROWS_AS(special_times_probe(bad, spec, alpha, 100, 64, ctx),
                  DomainError);
}

TEST_CASE("envelope function values and admissibility gate") {
  const PhiSpec phi{1.0, 1.1};
  CHECK(phi_value(phi, 1) > 0);
  CHECK(phi_value(phi, 100) > phi_value(phi, 10));
  CHECK(phi_value(phi, 1e8) > 0);

  const auto ctx = ctx256();
  const TrigSeriesFunction f = single_harmonic(1.0, 1, TermKind::cos);
  const std::vector<RealVector> alphas = seeded_alpha_samples(2, 42);
  // log Phi with unit loglog power: the tail integral diverges.
  CHECK_THROWS_AS(
      colzani_probe(f, alphas, PhiSpec{1.0, 1.0}, 64, 8, ctx),
      PhiInadmissible);
}

TEST_CASE("sampled envelope constants are finite and ordered") {
  const auto ctx = ctx256();
  TrigSeriesFunction f;
  f.dim = 1;
  for (int k = 1; k <= 5; ++k)
    f.terms.push_back(term(1.0 / (k * k), {k}, 0, TermKind::cos));
  const std::vector<RealVector> alphas = seeded_alpha_samples(4, 7);
  const ColzaniReport rep = colzani_probe(f, alphas, PhiSpec{1.0, 1.1}, 256, 32, ctx);
  CHECK(rep.all_finite);
  REQUIRE(rep.rows.size() == 4);
  for (const auto& row : rep.rows) {
    CHECK(row.c_emp > 0);
    CHECK(row.c_half > 0);
    // The max over t <= t_max dominates the max over t <= t_max/2.
    CHECK(row.c_emp >= row.c_half - 1e-12);
  }
  CHECK(rep.integral_1e8 > 0);
  CHECK(rep.tail_block_ratio <= 0.999);
}

TEST_CASE("seeded alpha samples are reproducible") {
  const auto a = seeded_alpha_samples(8, 1234);
  const auto b = seeded_alpha_samples(8, 1234);
  const auto c = seeded_alpha_samples(8, 4321);
  REQUIRE(a.size() == 8);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 8; ++i) {
    all_equal = all_equal && a[i].spec_string == b[i].spec_string;
    any_diff = any_diff || a[i].spec_string != c[i].spec_string;
    const Real v = a[static_cast<size_t>(i)].render(64)[0];
    CHECK(v > 0);
    CHECK(v < 1);
  }
  CHECK(all_equal);
  CHECK(any_diff);
}
