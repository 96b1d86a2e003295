#include <doctest.h>

#include "kron/poincare.hpp"
#include "kron/quadrature.hpp"

using namespace kron;

namespace {

PrecisionContext ctx256() {
  PrecisionContext ctx;
  ctx.bits = 256;
  ctx.tol = 1e-30;
  return ctx;
}

// Straightforward partial sum of the doubling series, long past the certified
// truncation depth, at a wider precision.  Shares no code with the library
// path.
Real brute_doubling(bool alternating, double A, const Real& t, int N) {
  PrecisionGuard guard(512);
  Real acc = 0;
  Real coef = 1;
  const Real step = alternating ? Real(-A) : Real(A);
  for (int k = 0; k <= N; ++k) {
    acc += coef * sin(t / pow(Real(2), k));
    coef *= step;
  }
  return acc;
}

}  // namespace

TEST_CASE("doubling-series constants at the reference point") {
  PrecisionGuard guard(256);
  const PoincareParams p = poincare_params(Real("0.5"), Real("1.8"));
  CHECK(abs(p.B - Real(1) / 3) <= Real("1e-70"));
  CHECK(abs(p.h - Real(25) / 12) <= Real("1e-70"));
  CHECK(p.valid);
  // Inadmissible A reports through the flag, not an error.
  const PoincareParams q = poincare_params(Real("0.5"), Real("1.01"));
  CHECK_FALSE(q.valid);
  CHECK_THROWS_AS(poincare_params(Real("0.9"), Real("1.8")), DomainError);
  CHECK_THROWS_AS(poincare_params(Real(0), Real("1.8")), DomainError);
}

TEST_CASE("series evaluation matches a brute partial sum") {
  const auto ctx = ctx256();
  PrecisionGuard guard(ctx);
  for (double A : {1.5, 1.8}) {
    for (const char* ts : {"0.5", "3.25", "41.0"}) {
      const Real t(ts);
      const SeriesValue f1 =
          eval_poincare_series(PoincareVariant::geometric, Real(A), t, ctx);
      const SeriesValue f2 =
          eval_poincare_series(PoincareVariant::alternating, Real(A), t, ctx);
      const Real want1 = brute_doubling(false, A, t, 900);
      const Real want2 = brute_doubling(true, A, t, 900);
      CHECK(abs(f1.value - want1) <= f1.tail + Real("1e-30"));
      CHECK(abs(f2.value - want2) <= f2.tail + Real("1e-30"));
      CHECK(f1.tail <= Real("1e-30"));
    }
  }
}

TEST_CASE("functional equations hold to rounding scale") {
  const auto ctx = ctx256();
  PrecisionGuard guard(ctx);
  const Real A("1.8");
  for (const char* ts : {"0.7", "5.3", "19.0"}) {
    const Real t(ts);
    const Real f1t =
        eval_poincare_series(PoincareVariant::geometric, A, t, ctx).value;
    const Real f1_2t =
        eval_poincare_series(PoincareVariant::geometric, A, 2 * t, ctx).value;
    CHECK(abs(f1_2t - (A * f1t + sin(2 * t))) <= Real("1e-28"));
    const Real f2t =
        eval_poincare_series(PoincareVariant::alternating, A, t, ctx).value;
    const Real f2_2t =
        eval_poincare_series(PoincareVariant::alternating, A, 2 * t, ctx).value;
    CHECK(abs(f2_2t - (sin(2 * t) - A * f2t)) <= Real("1e-28"));
  }
}

TEST_CASE("tail divergence is refused") {
  const auto ctx = ctx256();
  CHECK_THROWS_AS(eval_poincare_series(PoincareVariant::geometric, Real(2),
                                       Real(1), ctx),
                  TailDiverges);
  CHECK_THROWS_AS(eval_poincare_series(PoincareVariant::geometric, Real("2.3"),
                                       Real(1), ctx),
                  TailDiverges);
}

TEST_CASE("growth and doubling certification passes at the reference point") {
  const auto ctx = ctx256();
  const CertReport rep =
      certify_F1_inequalities(Real("1.8"), Real("0.5"), 6, 16, ctx);
  CHECK(rep.all_pass);
  CHECK(!rep.rows.empty());
  bool saw_doubling = false, saw_growth = false, saw_base = false;
  for (const auto& row : rep.rows) {
    if (row.family == "doubling") saw_doubling = true;
    if (row.family == "growth") saw_growth = true;
    if (row.family == "base") saw_base = true;
    CHECK(row.pass);
  }
  CHECK(saw_doubling);
  CHECK(saw_growth);
  CHECK(saw_base);
}

TEST_CASE("alternating variant: seed search and oscillation certificate") {
  const auto ctx = ctx256();
  const Real A("1.5");
  const F2Seed seed = find_F2_seed(A, ctx);
  CHECK(seed.t_seed > 0);
  CHECK(seed.t_seed < 10);
  CHECK(seed.h_seed > 0);
  const F2Report rep = certify_F2_oscillation(A, seed.t_seed, seed.h_seed, 4, ctx);
  CHECK(rep.cert.all_pass);
  // A fabricated overconfident seed margin must be rejected.
  CHECK_THROWS_AS(certify_F2_oscillation(A, seed.t_seed, seed.h_seed + 10, 4, ctx),
                  SeedInvalid);
}

TEST_CASE("fundamental Pell solutions of small discriminants") {
  const PellSolution p2 = pell_fundamental(2);
  CHECK(p2.u == 3);
  CHECK(p2.v == 2);
  const PellSolution p3 = pell_fundamental(3);
  CHECK(p3.u == 2);
  CHECK(p3.v == 1);
  const PellSolution p5 = pell_fundamental(5);
  CHECK(p5.u == 9);
  CHECK(p5.v == 4);
  CHECK_THROWS_AS(pell_fundamental(4), NotSquarefree);
  CHECK_THROWS_AS(pell_fundamental(12), NotSquarefree);
  CHECK_THROWS_AS(pell_fundamental(0), DomainError);
  // D = 61 has v_1 = 226153980, far past the scan cap.
  CHECK_THROWS_AS(pell_fundamental(61), BudgetExceeded);
}

TEST_CASE("power table follows the integer recurrence") {
  PellSolution sol = pell_fundamental(2);
  sol = pell_powers(sol, 5);
  REQUIRE(sol.powers.size() == 5);
  CHECK(sol.powers[1].u == 17);
  CHECK(sol.powers[1].v == 12);
  CHECK(sol.powers[2].u == 99);
  CHECK(sol.powers[2].v == 70);
  CHECK(sol.powers[4].u == 3363);
  CHECK(sol.powers[4].v == 2378);
  for (const auto& p : sol.powers) CHECK(p.u * p.u - 2 * p.v * p.v == 1);
  CHECK_THROWS_AS(pell_powers(sol, 65), OutOfRange);
}

TEST_CASE("lambda forms agree and the subtracted route is stable") {
  PellSolution sol = pell_fundamental(2);
  sol = pell_powers(sol, 30);
  PrecisionGuard guard(320);
  const Real lam = pell_lambda(sol, 320);
  CHECK(abs(lam - (3 - 2 * sqrt(Real(2)))) <= Real("1e-90"));
  for (int n : {1, 10, 30}) {
    const Real a = pell_lambda_pow(sol, n, 320);
    const Real b = pell_lambda_subtracted(sol.powers[static_cast<size_t>(n - 1)],
                                          2, 320);
    CHECK(abs(a - b) / b <= Real("1e-40"));
  }
}

TEST_CASE("lacunary Pell series matches a brute partial sum") {
  const auto ctx = ctx256();
  PellSolution sol = pell_fundamental(2);
  sol = pell_powers(sol, 10);
  PrecisionGuard guard(ctx);
  const Real t = 2 * pi_value() * 3;
  const SeriesValue got = eval_F3(Real(2), sol, t, ctx);

  Real want;
  {
    PrecisionGuard wide(512);
    const Real lam = 3 - 2 * sqrt(Real(2));
    Real acc = 0;
    Real an = 1, ln = 1;
    for (int n = 1; n <= 200; ++n) {
      an *= 2;
      ln *= lam;
      acc += an * sin(ln * Real(t));
    }
    want = acc;
  }
  CHECK(abs(got.value - want) <= got.tail + Real("1e-30"));
  // |A| * lambda >= 1 diverges.
  CHECK_THROWS_AS(eval_F3(Real(6), sol, t, ctx), TailDiverges);
}

TEST_CASE("kernel average: closed form equals quadrature") {
  const auto ctx = ctx256();
  PellSolution sol = pell_fundamental(2);
  sol = pell_powers(sol, 10);
  PrecisionGuard guard(ctx);
  for (const char* xs : {"0.0", "0.3", "0.71"}) {
    const Real x(xs);
    const SeriesValue closed = eval_pell_averaged_f(Real(2), sol, x, ctx);
    const Real quad = pell_averaged_f_quadrature(Real(2), sol, x, ctx);
    CHECK(abs(closed.value - quad) <= closed.tail + Real("1e-24"));
  }
}

TEST_CASE("orbit identity certificate on a short range") {
  const auto ctx = ctx256();
  PellSolution sol = pell_fundamental(2);
  sol = pell_powers(sol, 10);
  const IdentityReport rep = certify_discrete_identity(Real(2), sol, 10, ctx);
  CHECK(rep.all_pass);
  CHECK(rep.rows.size() == 11);  // t = 0..10
  CHECK(rep.max_residual <= Real("1e-27"));
}
