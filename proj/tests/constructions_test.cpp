#include <doctest.h>

#include <random>

#include "kron/birkhoff.hpp"
#include "kron/constructions.hpp"

using namespace kron;

namespace {

PrecisionContext ctx256() {
  PrecisionContext ctx;
  ctx.bits = 256;
  ctx.tol = 1e-30;
  return ctx;
}

// Tolerance wide enough to admit a truncated layered series through
// eval_series (its declared tail is an honest sup bound, not small).
PrecisionContext ctx_loose() {
  PrecisionContext ctx;
  ctx.bits = 256;
  ctx.tol = 0.9;
  return ctx;
}

}  // namespace

TEST_CASE("envelope shapes evaluate and validate") {
  PrecisionGuard guard(128);
  const SigmaSequence quarter = sigma_power(0.25);
  CHECK(quarter.value(14) == Real("0.5"));  // (14+2)^(-1/4)
  CHECK_NOTHROW(quarter.validate());
  CHECK_NOTHROW(sigma_log_inv().validate());
  CHECK(sigma_log_inv().value(0) > 0);

  CHECK_THROWS_AS(sigma_power(0).validate(), DomainError);
  CHECK_THROWS_AS(sigma_power(-0.5).validate(), DomainError);
}

TEST_CASE("layer placement for sqrt2 under the quarter-power envelope") {
  const auto ctx = ctx256();
  const BestApproxList ba = cf_best_approximations(alpha_sqrt(2), 1000000, ctx);
  const KocherginConstruction c =
      build_kochergin(alpha_sqrt(2), ba, sigma_power(0.25), 2, ctx);
  REQUIRE(c.chosen.size() == 2);
  CHECK(c.chosen[0].k == 1);
  CHECK(c.chosen[0].nu == 4);   // height 12
  CHECK(c.chosen[0].r == 16);
  CHECK(c.chosen[1].k == 2);
  CHECK(c.chosen[1].nu == 8);   // height 408
  CHECK(c.chosen[1].r == 576);
  CHECK(c.t0 == 16);
  PrecisionGuard guard(ctx);
  for (const auto& lev : c.chosen) {
    const Real s = c.sigma.value(lev.r);
    CHECK(s <= pow(Real(2), -lev.k));
  }
}

TEST_CASE("layer placement failures are reported as such") {
  const auto ctx = ctx256();
  const BestApproxList ba = cf_best_approximations(alpha_sqrt(2), 1000000, ctx);
  CHECK_THROWS_AS(build_kochergin(alpha_sqrt(2), ba, sigma_power(0.25), 0, ctx),
                  EmptyConstruction);
  const BestApproxList shallow = cf_best_approximations(alpha_sqrt(2), 100, ctx);
  CHECK_THROWS_AS(
      build_kochergin(alpha_sqrt(2), shallow, sigma_power(0.25), 2, ctx),
      DepthExceeded);
}

TEST_CASE("collapsed orbit sum matches its defining formula") {
  const auto ctx = ctx256();
  const BestApproxList ba = cf_best_approximations(alpha_sqrt(2), 1000000, ctx);
  const KocherginConstruction c =
      build_kochergin(alpha_sqrt(2), ba, sigma_power(0.25), 2, ctx);
  PrecisionGuard guard(ctx);
  for (long long t : {1LL, 16LL, 123LL}) {
    const SeriesValue got = kochergin_sum(c, t, ctx);
    Real want = 0;
    for (const auto& lev : c.chosen) {
      const auto& rec = ba.records[static_cast<size_t>(lev.nu - 1)];
      want += pow(Real(2), -lev.k) *
              abs(sin(pi_value() * frac(Real(t) * rec.delta))) / rec.zeta;
    }
    CHECK(abs(got.value - want) <= Real("1e-60"));
    CHECK(got.tail >= 0);
  }
}

TEST_CASE("telescoping: the generic engine reproduces the collapsed sum") {
  const auto strict = ctx256();
  const auto loose = ctx_loose();
  const BestApproxList ba = cf_best_approximations(alpha_sqrt(2), 1000000, strict);
  const KocherginConstruction c =
      build_kochergin(alpha_sqrt(2), ba, sigma_power(0.25), 2, strict);
  const TrigSeriesFunction f = kochergin_f_series(c, strict);
  CHECK(f.terms.size() == 4);  // two abs_sin terms per layer
  PrecisionGuard guard(strict);
  // The truncated layer stack carries an honest sup-scale tail, so the strict
  // tolerance must refuse it ...
  CHECK_THROWS_AS(eval_series(f, {Real(0)}, strict), TailDiverges);
  // ... while the loose context admits it, and the two independently coded
  // paths then agree to rounding scale.
  const std::vector<Real> x0 = {Real(0)};
  for (long long t : {1LL, 2LL, 17LL, 40LL, 500LL}) {
    const SeriesValue via_engine = birkhoff_sum(f, c.alpha, x0, t, loose);
    const SeriesValue collapsed = kochergin_sum(c, t, strict);
    CHECK(abs(via_engine.value - collapsed.value) <= Real("1e-40"));
  }
}

TEST_CASE("the layered function is uniformly bounded by pi") {
  const auto ctx = ctx256();
  const BestApproxList ba = cf_best_approximations(alpha_sqrt(2), 1000000, ctx);
  const KocherginConstruction c =
      build_kochergin(alpha_sqrt(2), ba, sigma_power(0.25), 2, ctx);
  PrecisionGuard guard(ctx);
  std::mt19937_64 rng(12345);
  const Real bound = pi_value() + Real("1e-20");
  for (int i = 0; i < 200; ++i) {
    const double xd = (rng() >> 11) * 0x1.0p-53;
    const SeriesValue v = kochergin_f_eval(c, {Real(xd)}, ctx);
    CHECK(abs(v.value) <= bound);
    CHECK(v.tail <= pi_value() * pow(Real(2), -2) + Real("1e-30"));
  }
}

TEST_CASE("growth certificate over the guaranteed window") {
  const auto ctx = ctx256();
  const BestApproxList ba = cf_best_approximations(alpha_sqrt(2), 1000000, ctx);
  const KocherginConstruction c =
      build_kochergin(alpha_sqrt(2), ba, sigma_power(0.25), 2, ctx);
  const GrowthReport rep = certify_growth(c, 16, 120, ctx);
  CHECK(rep.rows.size() == 105);
  CHECK(rep.all_pass_weak);
  CHECK(rep.all_pass_two);
  PrecisionGuard guard(ctx);
  for (const auto& row : rep.rows) {
    CHECK(row.value >= row.bound_weak - Real("1e-25"));
    CHECK(row.sigma_t > 0);
  }
  CHECK_THROWS_AS(certify_growth(c, 10, 120, ctx), RangeError);
  CHECK_THROWS_AS(certify_growth(c, 16, 600, ctx), RangeError);
}

TEST_CASE("smooth stack: structure and the collapsed quadratic form") {
  const auto ctx = ctx256();
  const BestApproxList ba = cf_best_approximations(alpha_sqrt(2), 1000000, ctx);
  const SmoothConstruction s = build_smooth(alpha_sqrt(2), ba, Real(1), 10, ctx);
  REQUIRE(s.series.terms.size() == 10);
  CHECK(s.series.dim == 1);
  PrecisionGuard guard(ctx);
  for (int nu = 0; nu < 10; ++nu) {
    const auto& rec = ba.records[static_cast<size_t>(nu)];
    const auto& term = s.series.terms[static_cast<size_t>(nu)];
    CHECK(term.kind == TermKind::sin);
    CHECK(std::llabs(term.freq[0]) == rec.height);
    const Real want =
        pow(Real(rec.height), -1) * sin(pi_value() * rec.zeta) / rec.zeta;
    CHECK(abs(term.coeff - want) <= Real("1e-60"));
  }
  // Collapsed orbit sum against its formula.
  for (long long t : {1LL, 7LL, 100LL}) {
    const SeriesValue got = smooth_orbit_sum(s, t, ctx);
    Real want = 0;
    for (int nu = 0; nu < 10; ++nu) {
      const auto& rec = ba.records[static_cast<size_t>(nu)];
      const Real sn = sin(pi_value() * frac(Real(t) * rec.delta));
      want += pow(Real(rec.height), -1) * sn * sn / rec.zeta;
    }
    CHECK(abs(got.value - want) <= Real("1e-55"));
  }

  CHECK_THROWS_AS(build_smooth(alpha_sqrt(2), ba, Real("0.5"), 10, ctx),
                  DomainError);
  BestApproxList shallow = ba;
  shallow.records.resize(5);
  CHECK_THROWS_AS(build_smooth(alpha_sqrt(2), shallow, Real(1), 10, ctx),
                  InsufficientDepth);
}

TEST_CASE("smooth telescoping against the generic engine") {
  const auto strict = ctx256();
  const auto loose = ctx_loose();
  const BestApproxList ba = cf_best_approximations(alpha_sqrt(2), 1000000, strict);
  const SmoothConstruction s = build_smooth(alpha_sqrt(2), ba, Real(1), 10, strict);
  PrecisionGuard guard(strict);
  const std::vector<Real> x0 = {Real(0)};
  for (long long t : {1LL, 5LL, 30LL, 200LL}) {
    const SeriesValue via_engine = birkhoff_sum(s.series, s.alpha, x0, t, loose);
    const SeriesValue collapsed = smooth_orbit_sum(s, t, strict);
    CHECK(abs(via_engine.value - collapsed.value) <= Real("1e-40"));
  }
}

TEST_CASE("smooth growth certificate windows tile the range") {
  const auto ctx = ctx256();
  const BestApproxList ba = cf_best_approximations(alpha_sqrt(2), 1000000, ctx);
  const SmoothConstruction s = build_smooth(alpha_sqrt(2), ba, Real(1), 10, ctx);
  const SmoothGrowthReport rep = certify_smooth_growth(s, 1000, ctx);
  CHECK(rep.all_pass);
  CHECK(rep.min_over_range > 0);
  REQUIRE(!rep.rows.empty());
  CHECK(rep.rows.front().t_first == 1);
  CHECK(rep.rows.back().t_last == 1000);
  for (size_t i = 0; i + 1 < rep.rows.size(); ++i)
    CHECK(rep.rows[i + 1].t_first == rep.rows[i].t_last + 1);
  for (const auto& row : rep.rows) {
    CHECK(row.min_value >= rep.min_over_range);
    CHECK(row.argmin_t >= row.t_first);
    CHECK(row.argmin_t <= row.t_last);
  }

  const SmoothConstruction tight = build_smooth(alpha_sqrt(2), ba, Real(1), 4, ctx);
  CHECK_THROWS_AS(certify_smooth_growth(tight, 17, ctx), RangeError);
  CHECK_NOTHROW(certify_smooth_growth(tight, 16, ctx));
}
