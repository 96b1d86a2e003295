#include <doctest.h>

#include "kron/quadrature.hpp"
#include "kron/series.hpp"

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

}  // namespace

TEST_CASE("single harmonics evaluate by their angle conventions") {
  const auto ctx = ctx256();
  PrecisionGuard guard(ctx);
  const Real tol = Real("1e-70");

  const TrigSeriesFunction c1 = single_harmonic(1.0, 1, TermKind::cos);
  CHECK(abs(eval_series(c1, {Real(0)}, ctx).value - 1) <= tol);
  CHECK(abs(eval_series(c1, {Real("0.25")}, ctx).value) <= tol);
  CHECK(abs(eval_series(c1, {Real("0.5")}, ctx).value + 1) <= tol);

  const TrigSeriesFunction s3 = single_harmonic(2.0, 3, TermKind::sin);
  // 2 sin(6 pi x) at x = 1/12: 2 sin(pi/2) = 2.
  CHECK(abs(eval_series(s3, {Real(1) / 12}, ctx).value - 2) <= tol);

  TrigSeriesFunction f;
  f.dim = 1;
  f.terms = {term(1.0, {1}, 0, TermKind::abs_sin)};
  // |sin(pi x)| at x = 1/2 -> 1; x = 1/6 -> 1/2.
  CHECK(abs(eval_series(f, {Real("0.5")}, ctx).value - 1) <= tol);
  CHECK(abs(eval_series(f, {Real(1) / 6}, ctx).value - Real("0.5")) <= tol);

  TrigSeriesFunction g;
  g.dim = 1;
  g.terms = {term(1.0, {1}, 0, TermKind::sin_sq)};
  // sin^2(pi x) at x = 1/2 -> 1; x = 1/4 -> 1/2.
  CHECK(abs(eval_series(g, {Real("0.5")}, ctx).value - 1) <= tol);
  CHECK(abs(eval_series(g, {Real("0.25")}, ctx).value - Real("0.5")) <= tol);
}

TEST_CASE("frequency vectors reduce mod one before the kernel") {
  const auto ctx = ctx256();
  PrecisionGuard guard(ctx);
  TrigSeriesFunction f;
  f.dim = 2;
  f.terms = {term(1.0, {2, -3}, 0.7, TermKind::cos)};
  const std::vector<Real> x = {Real("0.33"), Real("7.41")};
  const std::vector<Real> y = {Real("5.33"), Real("-3.59")};  // same mod 1
  const Real a = eval_series(f, x, ctx).value;
  const Real b = eval_series(f, y, ctx).value;
  CHECK(abs(a - b) <= Real("1e-65"));
  // phase is stored as a double, so the reference must use the same value
  const Real direct = cos(2 * pi_value() * (2 * Real("0.33") - 3 * Real("0.41")) +
                          Real(f.terms[0].phase));
  CHECK(abs(a - direct) <= Real("1e-65"));
}

TEST_CASE("declared tails propagate and oversize tails throw") {
  auto ctx = ctx256();
  TrigSeriesFunction f = single_harmonic(1.0, 1, TermKind::cos);
  f.tail_sup = Real("1e-32");
  const SeriesValue v = eval_series(f, {Real("0.1")}, ctx);
  CHECK(v.tail >= Real("1e-32"));
  f.tail_sup = Real("1e-20");  // > ctx.tol
  CHECK_THROWS_AS(eval_series(f, {Real("0.1")}, ctx), TailDiverges);
  ctx.tol = 1e-10;
  CHECK_NOTHROW(eval_series(f, {Real("0.1")}, ctx));
}

TEST_CASE("dimension mismatches are domain errors") {
  const auto ctx = ctx256();
  const TrigSeriesFunction f = single_harmonic(1.0, 1, TermKind::cos);
  CHECK_THROWS_AS(eval_series(f, {Real(0), Real(0)}, ctx), DomainError);
  CHECK_THROWS_AS(eval_series(f, {}, ctx), DomainError);
}

TEST_CASE("analytic means of the four kernels") {
  const auto ctx = ctx256();
  PrecisionGuard guard(ctx);
  const Real tol = Real("1e-70");

  CHECK(abs(analytic_mean(single_harmonic(1.0, 5, TermKind::cos), ctx)) <= tol);
  CHECK(abs(analytic_mean(single_harmonic(3.0, 2, TermKind::sin), ctx)) <= tol);

  TrigSeriesFunction f;
  f.dim = 1;
  f.terms = {term(2.0, {1}, 0, TermKind::abs_sin)};
  CHECK(abs(analytic_mean(f, ctx) - 4 / pi_value()) <= tol);

  TrigSeriesFunction g;
  g.dim = 1;
  g.terms = {term(3.0, {1}, 0, TermKind::sin_sq)};
  CHECK(abs(analytic_mean(g, ctx) - Real("1.5")) <= tol);

  // Zero frequency: the term is the constant K(phase).
  TrigSeriesFunction h;
  h.dim = 1;
  h.terms = {term(1.0, {0}, 0.3, TermKind::cos)};
  CHECK(abs(analytic_mean(h, ctx) - cos(Real(h.terms[0].phase))) <= tol);
}

TEST_CASE("quadrature mean agrees with the analytic mean") {
  auto ctx = ctx256();
  ctx.tol = 1e-25;
  PrecisionGuard guard(ctx);
  TrigSeriesFunction f;
  f.dim = 1;
  f.terms = {term(0.5, {2}, 0.4, TermKind::cos),
             term(1.5, {1}, 0, TermKind::abs_sin),
             term(2.0, {3}, 0.2, TermKind::sin_sq)};
  const Real want = analytic_mean(f, ctx);
  const Real got = series_mean_check(f, ctx);
  CHECK(abs(got - want) <= Real("1e-23"));
}

TEST_CASE("sup norm bound dominates sampled values") {
  const auto ctx = ctx256();
  PrecisionGuard guard(ctx);
  TrigSeriesFunction f;
  f.dim = 1;
  f.terms = {term(0.7, {2}, 0.9, TermKind::cos),
             term(-1.2, {5}, 0.1, TermKind::sin)};
  f.tail_sup = Real("1e-31");
  const Real bound = sup_norm_bound(f, ctx);
  CHECK(bound >= Real(0.7) + Real(1.2));  // sum of |coeff|, double-exact
  for (int i = 0; i < 64; ++i) {
    const Real x = Real(i) / 64;
    CHECK(abs(eval_series(f, {x}, ctx).value) <= bound);
  }
}

TEST_CASE("tanh-sinh integrates analytic integrands to target") {
  PrecisionGuard guard(256);
  const Real target = Real("1e-40");
  const auto sq = [](const Real& x) { return x * x; };
  const QuadratureResult r = tanh_sinh(sq, Real(0), Real(1), target);
  CHECK(abs(r.value - Real(1) / 3) <= Real("1e-38"));

  const auto s = [](const Real& x) { return sin(x); };
  const QuadratureResult r2 = tanh_sinh(s, Real(0), pi_value(), target);
  CHECK(abs(r2.value - 2) <= Real("1e-38"));
}

TEST_CASE("simpson refinement reaches its tolerance or throws") {
  const auto f = [](double x) { return std::sin(x); };
  const double v = simpson_refine(f, 0.0, 3.141592653589793, 1e-10);
  CHECK(std::abs(v - 2.0) <= 1e-8);
  // A discontinuous integrand cannot stabilize at an absurd tolerance with
  // only a couple of refinement levels.
  const auto step = [](double x) { return x < 0.123456 ? 0.0 : 1.0; };
  CHECK_THROWS_AS(simpson_refine(step, 0.0, 1.0, 1e-14, 4, 2),
                  QuadratureUnstable);
}
