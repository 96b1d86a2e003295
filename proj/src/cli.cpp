#include "kron/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kron/birkhoff.hpp"
#include "kron/constructions.hpp"
#include "kron/diophantine.hpp"
#include "kron/poincare.hpp"
#include "kron/report.hpp"

namespace kron {

namespace {

struct Outputs {
  std::string prefix = "out";
  bool plot = false;
};

std::string bool_str(bool b) { return b ? "1" : "0"; }

std::vector<long long> parse_ll_list(const std::string& s) {
  std::vector<long long> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoll(item));
  }
  if (out.empty()) throw UsageError("empty integer list: " + s);
  return out;
}

SigmaSequence parse_sigma(const std::string& s) {
  if (s == "log_inv") return sigma_log_inv();
  if (s.rfind("power:", 0) == 0) return sigma_power(std::stod(s.substr(6)));
  throw UsageError("sigma spec must be power:<p> or log_inv, got " + s);
}

TrigSeriesFunction parse_harmonic(const std::string& s, double coeff) {
  const auto colon = s.find(':');
  if (colon == std::string::npos)
    throw UsageError("harmonic spec must be sin:<m> or cos:<m>, got " + s);
  const std::string kind = s.substr(0, colon);
  const long long m = std::stoll(s.substr(colon + 1));
  if (kind == "cos") return single_harmonic(coeff, m, TermKind::cos);
  if (kind == "sin") return single_harmonic(coeff, m, TermKind::sin);
  throw UsageError("harmonic kind must be sin or cos, got " + kind);
}

// The built-in absolutely-summable test series: coefficients k^{-2}.
TrigSeriesFunction summable_series(int terms) {
  TrigSeriesFunction f;
  f.dim = 1;
  f.label = "harmonic_sq(" + std::to_string(terms) + ")";
  for (int k = 1; k <= terms; ++k) {
    TrigTerm t;
    t.coeff = Real(1) / (Real(k) * Real(k));
    t.freq = {k};
    t.phase = 0;
    t.kind = TermKind::cos;
    f.terms.push_back(std::move(t));
  }
  return f;
}

class Runner {
 public:
  Runner(const std::string& command, const PrecisionContext& ctx,
         std::uint64_t seed, const Outputs& out)
      : command_(command), ctx_(ctx), seed_(seed), out_(out),
        start_(std::chrono::steady_clock::now()) {
    meta_.add("command", command);
    meta_.add("version", kLibraryVersion);
    meta_.add_raw("bits", std::to_string(ctx.bits));
    meta_.add_raw("digits10", std::to_string(digits10_for_bits(ctx.bits)));
    meta_.add_raw("tol", format_double(ctx.tol));
    meta_.add_raw("seed", std::to_string(seed));
  }

  Sidecar& meta() { return meta_; }
  const PrecisionContext& ctx() const { return ctx_; }
  std::uint64_t seed() const { return seed_; }

  // Writes all artifacts and converts the contract verdict into the exit
  // code. Wall time goes only into the sidecar, keeping the CSV bytes
  // reproducible.
  int finish(const CsvTable& table, bool contract_pass,
             const SumTrace* trace = nullptr) {
    std::string schema;
    for (size_t i = 0; i < table.header.size(); ++i) {
      if (i) schema += ',';
      schema += table.header[i];
    }
    meta_.add("csv_schema", schema);
    meta_.add_raw("rows", std::to_string(table.rows.size()));
    meta_.add_raw("contract_pass", contract_pass ? "true" : "false");
    const auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start_);
    meta_.add_raw("wall_ms", std::to_string(wall.count()));
    write_csv(table, out_.prefix + ".csv");
    write_sidecar(meta_, out_.prefix + ".json");
    if (out_.plot && trace) emit_plot(*trace, out_.prefix + ".svg");
    return contract_pass ? 0 : 2;
  }

 private:
  std::string command_;
  PrecisionContext ctx_;
  std::uint64_t seed_;
  Outputs out_;
  Sidecar meta_;
  std::chrono::steady_clock::time_point start_;
};

int cmd_best_approx(Runner& r, const std::string& alpha_spec, long long m_max,
                    const std::string& method) {
  const RealVector alpha = parse_alpha(alpha_spec);
  r.meta().add("alpha", alpha_spec);
  r.meta().add_raw("m_max", std::to_string(m_max));
  r.meta().add("method", method);
  BestApproxList ba;
  if (method == "cf" || (method == "auto" && alpha.dim() == 1))
    ba = cf_best_approximations(alpha, m_max, r.ctx());
  else
    ba = enumerate_best_approximations(alpha, m_max, r.ctx());

  CsvTable t;
  t.header = {"nu", "M", "zeta", "minkowski_ok"};
  bool all_ok = true;
  for (long long nu = 1; nu <= ba.depth(); ++nu) {
    const auto& rec = ba.records[static_cast<size_t>(nu - 1)];
    bool ok = true;
    if (nu < ba.depth()) {
      const auto& next = ba.records[static_cast<size_t>(nu)];
      ok = rec.zeta <= pow(Real(next.height), -ba.dim);
    }
    all_ok = all_ok && ok;
    t.rows.push_back({std::to_string(rec.nu), std::to_string(rec.height),
                      format_real(rec.zeta), bool_str(ok)});
  }
  return r.finish(t, all_ok);
}

int cmd_exponents(Runner& r, const std::string& alpha_spec, long long m_max,
                  long long q_max) {
  const RealVector alpha = parse_alpha(alpha_spec);
  r.meta().add("alpha", alpha_spec);
  r.meta().add_raw("m_max", std::to_string(m_max));
  r.meta().add_raw("q_max", std::to_string(q_max));
  const BestApproxList ba =
      alpha.dim() == 1 ? cf_best_approximations(alpha, m_max, r.ctx())
                       : enumerate_best_approximations(alpha, m_max, r.ctx());
  const SimultaneousList sa = simultaneous_best(alpha, q_max, r.ctx());
  const ExponentEstimate est = estimate_exponents(ba, sa);
  CsvTable t;
  t.header = {"omega_est", "omega_hat_est", "lambda_hat_est", "depth_ba",
              "depth_sa"};
  t.rows.push_back({format_double(est.omega_est),
                    format_double(est.omega_hat_est),
                    format_double(est.lambda_hat_est),
                    std::to_string(est.depth_ba),
                    std::to_string(est.depth_sa)});
  return r.finish(t, true);
}

void append_cert_rows(CsvTable& t, const CertReport& cert) {
  for (const auto& row : cert.rows)
    t.rows.push_back({row.family, format_real(row.t), format_real(row.value),
                      format_real(row.bound), format_real(row.margin),
                      bool_str(row.pass)});
}

int cmd_poincare(Runner& r, double a_d, double t0_d, int n_max, int grid,
                 bool with_f2, int f2_n_max) {
  const Real a = Real(a_d);
  const Real t0 = Real(t0_d);
  r.meta().add_raw("A", format_double(a_d));
  r.meta().add_raw("t0", format_double(t0_d));
  r.meta().add_raw("n_max", std::to_string(n_max));
  r.meta().add_raw("grid", std::to_string(grid));
  const PoincareParams params = poincare_params(t0, a);
  r.meta().add("B", format_real(params.B));
  r.meta().add("h", format_real(params.h));
  r.meta().add_raw("params_valid", params.valid ? "true" : "false");

  CsvTable t;
  t.header = {"family", "t", "value", "bound", "margin", "pass"};
  const CertReport f1 = certify_F1_inequalities(a, t0, n_max, grid, r.ctx());
  append_cert_rows(t, f1);
  bool all = f1.all_pass;
  if (with_f2) {
    const F2Seed seed = find_F2_seed(a, r.ctx());
    r.meta().add("f2_t_seed", format_real(seed.t_seed));
    r.meta().add("f2_h_seed", format_real(seed.h_seed));
    const F2Report f2 =
        certify_F2_oscillation(a, seed.t_seed, seed.h_seed, f2_n_max, r.ctx());
    append_cert_rows(t, f2.cert);
    all = all && f2.cert.all_pass;
  }
  return r.finish(t, all);
}

int cmd_pell(Runner& r, long long d, int n_powers, double a_d,
             long long identity_t_max) {
  r.meta().add_raw("D", std::to_string(d));
  r.meta().add_raw("n_powers", std::to_string(n_powers));
  r.meta().add_raw("A", format_double(a_d));
  r.meta().add_raw("identity_t_max", std::to_string(identity_t_max));
  PellSolution sol = pell_fundamental(d);
  sol = pell_powers(sol, n_powers);
  r.meta().add("u1", sol.u.str());
  r.meta().add("v1", sol.v.str());

  if (identity_t_max > 0) {
    const IdentityReport rep =
        certify_discrete_identity(Real(a_d), sol, identity_t_max, r.ctx());
    CsvTable t;
    t.header = {"t", "lhs", "rhs", "residual", "bound", "pass"};
    for (const auto& row : rep.rows)
      t.rows.push_back({std::to_string(row.t), format_real(row.lhs),
                        format_real(row.rhs), format_real(row.residual),
                        format_real(row.bound), bool_str(row.pass)});
    r.meta().add("max_residual", format_real(rep.max_residual));
    return r.finish(t, rep.all_pass);
  }

  CsvTable t;
  t.header = {"n", "u", "v", "identity_ok", "lambda_rel_err"};
  bool all = true;
  PrecisionGuard guard(r.ctx().bits + 32);
  const Real lam = pell_lambda(sol, r.ctx().bits + 32);
  Real lam_n = 1;
  for (const auto& p : sol.powers) {
    lam_n *= lam;
    const bool ok = p.u * p.u - d * p.v * p.v == 1;
    all = all && ok;
    const Real direct = pell_lambda_subtracted(p, d, r.ctx().bits + 32);
    const Real rel = abs(lam_n - direct) / direct;
    t.rows.push_back({std::to_string(p.n), p.u.str(), p.v.str(), bool_str(ok),
                      format_real(rel)});
  }
  return r.finish(t, all);
}

int cmd_kochergin(Runner& r, const std::string& alpha_spec,
                  const std::string& sigma_spec, int k_max, long long m_max,
                  bool certify, long long t_from, long long t_to) {
  const RealVector alpha = parse_alpha(alpha_spec);
  const SigmaSequence sigma = parse_sigma(sigma_spec);
  r.meta().add("alpha", alpha_spec);
  r.meta().add("sigma", sigma_spec);
  r.meta().add_raw("k_max", std::to_string(k_max));
  r.meta().add_raw("m_max", std::to_string(m_max));
  const BestApproxList ba =
      alpha.dim() == 1 ? cf_best_approximations(alpha, m_max, r.ctx())
                       : enumerate_best_approximations(alpha, m_max, r.ctx());
  const KocherginConstruction c = build_kochergin(alpha, ba, sigma, k_max, r.ctx());
  r.meta().add_raw("t0", std::to_string(c.t0));
  r.meta().add_raw("r_last", std::to_string(c.chosen.back().r));

  if (!certify) {
    CsvTable t;
    t.header = {"k", "nu", "r", "M", "zeta"};
    for (const auto& lev : c.chosen) {
      const auto& rec = ba.records[static_cast<size_t>(lev.nu - 1)];
      t.rows.push_back({std::to_string(lev.k), std::to_string(lev.nu),
                        std::to_string(lev.r), std::to_string(rec.height),
                        format_real(rec.zeta)});
    }
    return r.finish(t, true);
  }

  if (t_from <= 0) t_from = c.t0;
  if (t_to <= 0) t_to = c.chosen.back().r;
  const GrowthReport rep = certify_growth(c, t_from, t_to, r.ctx());
  CsvTable t;
  t.header = {"t", "value", "tail", "sigma_t", "bound_weak", "bound_two",
              "pass_weak", "pass_two"};
  SumTrace trace;
  trace.alpha_desc = alpha_spec;
  trace.f_desc = "layered_abs_sin";
  trace.probe = "kochergin_growth";
  for (const auto& row : rep.rows) {
    t.rows.push_back({std::to_string(row.t), format_real(row.value),
                      format_real(row.tail), format_real(row.sigma_t),
                      format_real(row.bound_weak), format_real(row.bound_two),
                      bool_str(row.pass_weak), bool_str(row.pass_two)});
    SumRow sr;
    sr.t = row.t;
    sr.s = row.value;
    sr.bound = row.bound_weak;
    sr.pass = row.pass_weak;
    trace.rows.push_back(std::move(sr));
  }
  r.meta().add_raw("all_pass_weak", rep.all_pass_weak ? "true" : "false");
  r.meta().add_raw("all_pass_two", rep.all_pass_two ? "true" : "false");
  return r.finish(t, rep.all_pass_weak, &trace);
}

int cmd_smooth(Runner& r, const std::string& alpha_spec, double d_d,
               int n_terms, long long m_max, long long t_max, bool certify) {
  const RealVector alpha = parse_alpha(alpha_spec);
  r.meta().add("alpha", alpha_spec);
  r.meta().add_raw("d", format_double(d_d));
  r.meta().add_raw("n_terms", std::to_string(n_terms));
  r.meta().add_raw("m_max", std::to_string(m_max));
  r.meta().add_raw("t_max", std::to_string(t_max));
  const BestApproxList ba =
      alpha.dim() == 1 ? cf_best_approximations(alpha, m_max, r.ctx())
                       : enumerate_best_approximations(alpha, m_max, r.ctx());
  const SmoothConstruction s = build_smooth(alpha, ba, Real(d_d), n_terms, r.ctx());
  r.meta().add_raw("margin", format_double(s.margin));

  if (!certify) {
    CsvTable t;
    t.header = {"nu", "M", "zeta", "coeff"};
    for (int nu = 1; nu <= n_terms; ++nu) {
      const auto& rec = ba.records[static_cast<size_t>(nu - 1)];
      t.rows.push_back({std::to_string(nu), std::to_string(rec.height),
                        format_real(rec.zeta),
                        format_real(s.series.terms[static_cast<size_t>(nu - 1)].coeff)});
    }
    return r.finish(t, true);
  }

  const SmoothGrowthReport rep = certify_smooth_growth(s, t_max, r.ctx());
  CsvTable t;
  t.header = {"nu", "t_first", "t_last", "min_value", "argmin_t", "prediction",
              "pass"};
  for (const auto& row : rep.rows)
    t.rows.push_back({std::to_string(row.nu), std::to_string(row.t_first),
                      std::to_string(row.t_last), format_real(row.min_value),
                      std::to_string(row.argmin_t),
                      format_real(row.prediction), bool_str(row.pass)});
  r.meta().add("min_over_range", format_real(rep.min_over_range));
  const bool contract = rep.all_pass && rep.min_over_range > 0;
  return r.finish(t, contract);
}

int trace_to_exit(Runner& r, const SumTrace& trace) {
  CsvTable t;
  t.header = {"t", "s", "bound", "pass"};
  for (const auto& row : trace.rows)
    t.rows.push_back({std::to_string(row.t), format_real(row.s),
                      format_real(row.bound), bool_str(row.pass)});
  return r.finish(t, trace.all_pass, &trace);
}

int cmd_koksma(Runner& r, const std::string& alpha_spec, long long t_max,
               const std::string& f_spec, double coeff) {
  const RealVector alpha = parse_alpha(alpha_spec);
  r.meta().add("alpha", alpha_spec);
  r.meta().add_raw("t_max", std::to_string(t_max));
  r.meta().add("f", f_spec);
  const TrigSeriesFunction f = parse_harmonic(f_spec, coeff);
  return trace_to_exit(r, koksma_probe(f, alpha, t_max, r.ctx()));
}

int cmd_probe_weyl(Runner& r, const std::string& alpha_spec,
                   const std::string& t_list, const std::string& f_spec,
                   double coeff, double threshold) {
  const RealVector alpha = parse_alpha(alpha_spec);
  r.meta().add("alpha", alpha_spec);
  r.meta().add("t_list", t_list);
  const TrigSeriesFunction f = parse_harmonic(f_spec, coeff);
  const std::vector<Real> x0(static_cast<size_t>(f.dim), Real(0));
  return trace_to_exit(
      r, weyl_probe(f, alpha, x0, parse_ll_list(t_list), r.ctx(), threshold));
}

int cmd_probe_sidorov(Runner& r, const std::string& alpha_spec, long long q_max,
                      int x_grid, const std::string& f_spec, double coeff,
                      double threshold) {
  const RealVector alpha = parse_alpha(alpha_spec);
  r.meta().add("alpha", alpha_spec);
  r.meta().add_raw("q_max", std::to_string(q_max));
  r.meta().add_raw("x_grid", std::to_string(x_grid));
  const TrigSeriesFunction f = parse_harmonic(f_spec, coeff);
  const BestApproxList ba = cf_best_approximations(alpha, q_max, r.ctx());
  std::vector<long long> qs;
  for (const auto& rec : ba.records) qs.push_back(rec.height);
  return trace_to_exit(
      r, sidorov_probe(f, alpha, qs, x_grid, r.ctx(), threshold));
}

int cmd_probe_integral(Runner& r, int dim, const std::string& box_spec,
                       long long t, int quad) {
  r.meta().add_raw("dim", std::to_string(dim));
  r.meta().add("box", box_spec);
  r.meta().add_raw("t", std::to_string(t));
  TrigSeriesFunction f;
  f.dim = dim;
  TrigTerm term;
  term.coeff = 1;
  term.freq.assign(static_cast<size_t>(dim), 1);
  term.kind = TermKind::cos;
  f.terms.push_back(term);
  f.label = dim == 1 ? "cos(2 pi x)" : "cos(2 pi (x1+...))";

  std::vector<std::pair<double, double>> box;
  std::stringstream ss(box_spec);
  std::string item;
  std::vector<double> vals;
  while (std::getline(ss, item, ','))
    if (!item.empty()) vals.push_back(std::stod(item));
  if (vals.size() != static_cast<size_t>(2 * dim))
    throw UsageError("box needs 2*dim comma-separated endpoints");
  for (int j = 0; j < dim; ++j)
    box.emplace_back(vals[static_cast<size_t>(2 * j)],
                     vals[static_cast<size_t>(2 * j + 1)]);

  const IntegralBoundResult res = integral_bound_probe(f, box, t, quad, r.ctx());
  CsvTable tab;
  tab.header = {"t", "value", "m_sup", "bound", "pass", "points"};
  tab.rows.push_back({std::to_string(res.t), format_double(res.value),
                      format_double(res.m_sup), format_double(res.bound),
                      bool_str(res.pass), std::to_string(res.points_used)});
  return r.finish(tab, res.pass);
}

int cmd_probe_window(Runner& r, long long a, long long q,
                     const std::string& t_list) {
  r.meta().add_raw("a", std::to_string(a));
  r.meta().add_raw("q", std::to_string(q));
  r.meta().add("t_list", t_list);
  const TrigSeriesFunction f = single_harmonic(1.0, 1, TermKind::cos);
  CsvTable tab;
  tab.header = {"t", "value", "m_sup", "bound", "pass", "points"};
  bool all = true;
  for (long long t : parse_ll_list(t_list)) {
    const IntegralBoundResult res = rational_window_bound_probe(f, a, q, t, r.ctx());
    all = all && res.pass;
    tab.rows.push_back({std::to_string(res.t), format_double(res.value),
                        format_double(res.m_sup), format_double(res.bound),
                        bool_str(res.pass), std::to_string(res.points_used)});
  }
  return r.finish(tab, all);
}

int cmd_probe_special(Runner& r, const std::string& alpha_spec, double c,
                      double gamma, int m_cap, const std::string& q_list,
                      int x_grid) {
  const RealVector alpha = parse_alpha(alpha_spec);
  r.meta().add("alpha", alpha_spec);
  r.meta().add_raw("C", format_double(c));
  r.meta().add_raw("gamma", format_double(gamma));
  r.meta().add_raw("m_cap", std::to_string(m_cap));
  r.meta().add_raw("x_grid", std::to_string(x_grid));
  DecaySpec spec;
  spec.C = c;
  spec.gamma = gamma;
  const TrigSeriesFunction f = realize_decay(spec, alpha.dim(), m_cap);
  CsvTable tab;
  tab.header = {"Q", "t_star", "r_star", "observed", "bound", "nu_opt",
                "warn_gamma", "pass"};
  bool all = true;
  double prev_observed = -1;
  bool monotone = true;
  for (long long q : parse_ll_list(q_list)) {
    const SpecialTimesReport rep =
        special_times_probe(f, spec, alpha, q, x_grid, r.ctx());
    all = all && rep.pass;
    if (prev_observed >= 0 && rep.observed > prev_observed) monotone = false;
    prev_observed = rep.observed;
    tab.rows.push_back({std::to_string(rep.q_cap), std::to_string(rep.t_star),
                        format_double(rep.r_star), format_double(rep.observed),
                        format_double(rep.bound), std::to_string(rep.nu_opt),
                        bool_str(rep.warn_gamma), bool_str(rep.pass)});
  }
  r.meta().add_raw("monotone", monotone ? "true" : "false");
  return r.finish(tab, all && monotone);
}

int cmd_probe_colzani(Runner& r, long long t_max, int x_grid, int samples,
                      int terms, double log_power, double loglog_power,
                      double max_unstable) {
  r.meta().add_raw("t_max", std::to_string(t_max));
  r.meta().add_raw("x_grid", std::to_string(x_grid));
  r.meta().add_raw("samples", std::to_string(samples));
  r.meta().add_raw("terms", std::to_string(terms));
  r.meta().add_raw("log_power", format_double(log_power));
  r.meta().add_raw("loglog_power", format_double(loglog_power));
  PhiSpec phi;
  phi.log_power = log_power;
  phi.loglog_power = loglog_power;
  const TrigSeriesFunction f = summable_series(terms);
  const std::vector<RealVector> alphas = seeded_alpha_samples(samples, r.seed());
  const ColzaniReport rep = colzani_probe(f, alphas, phi, t_max, x_grid, r.ctx());
  r.meta().add_raw("integral_1e8", format_double(rep.integral_1e8));
  r.meta().add_raw("tail_block_ratio", format_double(rep.tail_block_ratio));
  r.meta().add_raw("unstable_fraction", format_double(rep.unstable_fraction));
  CsvTable tab;
  tab.header = {"index", "c_emp", "c_half", "stable"};
  for (const auto& row : rep.rows)
    tab.rows.push_back({std::to_string(row.index), format_double(row.c_emp),
                        format_double(row.c_half), bool_str(row.stable)});
  const bool contract =
      rep.all_finite && rep.unstable_fraction <= max_unstable + 1e-12;
  return r.finish(tab, contract);
}

int cmd_report(Runner& r, const std::string& in_csv) {
  std::ifstream in(in_csv);
  if (!in) throw UsageError("report: cannot open " + in_csv);
  r.meta().add("in", in_csv);
  SumTrace trace;
  trace.probe = "report(" + in_csv + ")";
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() < 3)
      throw UsageError("report: need at least 3 columns (t, value, bound)");
    SumRow row;
    row.t = std::stoll(fields[0]);
    row.s = Real(fields[1]);
    row.bound = Real(fields[2]);
    row.pass = true;
    trace.rows.push_back(std::move(row));
  }
  if (trace.rows.empty()) throw UsageError("report: no data rows in " + in_csv);
  CsvTable tab;
  tab.header = {"rows"};
  tab.rows.push_back({std::to_string(trace.rows.size())});
  return r.finish(tab, true, &trace);
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Kronecker-sequence numerical laboratory"};
  app.require_subcommand(1);
  app.fallthrough();

  unsigned default_bits = 256;
  if (const char* env = std::getenv("KRONLAB_BITS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 64 && v <= 1 << 20) default_bits = static_cast<unsigned>(v);
  }

  unsigned bits = default_bits;
  double tol = 1e-30;
  std::uint64_t seed = 0x5EED;
  Outputs out;
  app.add_option("--bits", bits, "working precision in bits");
  app.add_option("--tol", tol, "certification tolerance");
  app.add_option("--seed", seed, "pseudo-random seed");
  app.add_option("--out", out.prefix, "output path prefix");
  app.add_flag("--plot", out.plot, "also emit an SVG plot when available");

  // best-approx
  auto* ba_cmd = app.add_subcommand("best-approx", "best approximation records");
  std::string ba_alpha = "sqrt2";
  long long ba_mmax = 10000;
  std::string ba_method = "auto";
  ba_cmd->add_option("--alpha", ba_alpha, "alpha spec")->required();
  ba_cmd->add_option("--m-max", ba_mmax, "height budget");
  ba_cmd->add_option("--method", ba_method, "cf | enumerate | auto");

  // exponents
  auto* ex_cmd = app.add_subcommand("exponents", "diophantine exponent estimates");
  std::string ex_alpha = "sqrt2";
  long long ex_mmax = 1000000, ex_qmax = 10000;
  ex_cmd->add_option("--alpha", ex_alpha, "alpha spec")->required();
  ex_cmd->add_option("--m-max", ex_mmax, "dual height budget");
  ex_cmd->add_option("--q-max", ex_qmax, "simultaneous budget");

  // poincare
  auto* po_cmd = app.add_subcommand("poincare", "doubling-series certification");
  double po_a = 1.8, po_t0 = 0.5;
  int po_nmax = 12, po_grid = 64, po_f2_nmax = 8;
  bool po_f2 = false;
  po_cmd->add_option("--A", po_a, "series parameter A")->required();
  po_cmd->add_option("--t0", po_t0, "base point t0");
  po_cmd->add_option("--n-max", po_nmax, "octave count");
  po_cmd->add_option("--grid", po_grid, "grid points per octave");
  po_cmd->add_flag("--f2", po_f2, "also certify the alternating variant");
  po_cmd->add_option("--f2-n-max", po_f2_nmax, "alternating doubling depth");

  // pell
  auto* pe_cmd = app.add_subcommand("pell", "Pell solutions and the discrete identity");
  long long pe_d = 2, pe_itmax = 0;
  int pe_n = 30;
  double pe_a = 2;
  pe_cmd->add_option("--D", pe_d, "nonsquare squarefree D")->required();
  pe_cmd->add_option("--n-powers", pe_n, "power table depth (max 64)");
  pe_cmd->add_option("--A", pe_a, "series parameter A");
  pe_cmd->add_option("--identity-t-max", pe_itmax,
                     "certify the discrete identity up to this t");

  // kochergin
  auto* ko_cmd = app.add_subcommand("kochergin", "layered construction");
  std::string ko_alpha = "sqrt2", ko_sigma = "power:0.25";
  int ko_kmax = 2;
  long long ko_mmax = 1000000, ko_tfrom = 0, ko_tto = 0;
  bool ko_certify = false;
  ko_cmd->add_option("--alpha", ko_alpha, "alpha spec")->required();
  ko_cmd->add_option("--sigma", ko_sigma, "power:<p> or log_inv");
  ko_cmd->add_option("--k-max", ko_kmax, "layer count");
  ko_cmd->add_option("--m-max", ko_mmax, "record budget");
  ko_cmd->add_flag("--certify", ko_certify, "emit the growth certification");
  ko_cmd->add_option("--t-from", ko_tfrom, "growth range start (default t0)");
  ko_cmd->add_option("--t-to", ko_tto, "growth range end (default r_last)");

  // smooth
  auto* sm_cmd = app.add_subcommand("smooth", "smooth layered construction");
  std::string sm_alpha = "sqrt2";
  double sm_d = 1;
  int sm_terms = 16;
  long long sm_mmax = 1000000, sm_tmax = 10000;
  bool sm_certify = false;
  sm_cmd->add_option("--alpha", sm_alpha, "alpha spec")->required();
  sm_cmd->add_option("--d", sm_d, "smoothness weight d >= 1");
  sm_cmd->add_option("--n-terms", sm_terms, "realized layers");
  sm_cmd->add_option("--m-max", sm_mmax, "record budget");
  sm_cmd->add_option("--t-max", sm_tmax, "certification horizon");
  sm_cmd->add_flag("--certify", sm_certify, "emit the window certification");

  // koksma
  auto* kk_cmd = app.add_subcommand("koksma", "variation-discrepancy inequality");
  std::string kk_alpha = "sqrt2", kk_f = "cos:1";
  long long kk_tmax = 10000;
  double kk_coeff = 1;
  kk_cmd->add_option("--alpha", kk_alpha, "alpha spec")->required();
  kk_cmd->add_option("--t-max", kk_tmax, "horizon");
  kk_cmd->add_option("--f", kk_f, "harmonic kind:freq");
  kk_cmd->add_option("--coeff", kk_coeff, "harmonic coefficient");

  // probes
  auto* pr_cmd = app.add_subcommand("probes", "inequality probes");
  std::string pr_kind;
  pr_cmd->add_option("--kind", pr_kind,
                     "weyl | sidorov | integral | window | special | colzani")
      ->required();
  std::string pr_alpha = "sqrt2", pr_f = "cos:1";
  double pr_coeff = 1, pr_threshold = 1e-2;
  std::string pr_tlist = "10,100,1000,10000,100000";
  long long pr_qmax = 100000;
  int pr_xgrid = 64;
  double pr_sid_threshold = 0.05;
  int pr_dim = 1;
  std::string pr_box = "0,0.3";
  long long pr_t = 10;
  int pr_quad = 64;
  long long pr_a = 1, pr_q = 3;
  std::string pr_ts = "10,100,1000";
  double pr_c = 1, pr_gamma = 7;
  int pr_mcap = 4;
  std::string pr_qlist = "100,1000,10000";
  int pr_sgrid = 256;
  long long pr_col_tmax = 10000;
  int pr_col_grid = 256, pr_samples = 32, pr_terms = 20;
  double pr_logp = 1, pr_loglogp = 1.1, pr_maxunstable = 0;
  pr_cmd->add_option("--alpha", pr_alpha, "alpha spec");
  pr_cmd->add_option("--f", pr_f, "harmonic kind:freq");
  pr_cmd->add_option("--coeff", pr_coeff, "harmonic coefficient");
  pr_cmd->add_option("--threshold", pr_threshold, "weyl residual threshold");
  pr_cmd->add_option("--t-list", pr_tlist, "weyl horizons");
  pr_cmd->add_option("--q-max", pr_qmax, "sidorov denominator budget");
  pr_cmd->add_option("--x-grid", pr_xgrid, "sidorov grid");
  pr_cmd->add_option("--sidorov-threshold", pr_sid_threshold,
                     "sidorov final-row threshold");
  pr_cmd->add_option("--dim", pr_dim, "integral probe dimension");
  pr_cmd->add_option("--box", pr_box, "integral probe box endpoints");
  pr_cmd->add_option("--t", pr_t, "integral probe horizon");
  pr_cmd->add_option("--quad", pr_quad, "starting quadrature panels");
  pr_cmd->add_option("--a", pr_a, "window numerator");
  pr_cmd->add_option("--q", pr_q, "window denominator");
  pr_cmd->add_option("--window-t-list", pr_ts, "window horizons");
  pr_cmd->add_option("--C", pr_c, "decay envelope constant");
  pr_cmd->add_option("--gamma", pr_gamma, "decay envelope exponent");
  pr_cmd->add_option("--m-cap", pr_mcap, "decay realization cap");
  pr_cmd->add_option("--Q-list", pr_qlist, "special-times search ceilings");
  pr_cmd->add_option("--special-x-grid", pr_sgrid, "special-times grid per dim");
  pr_cmd->add_option("--colzani-t-max", pr_col_tmax, "colzani horizon");
  pr_cmd->add_option("--colzani-x-grid", pr_col_grid, "colzani x grid");
  pr_cmd->add_option("--samples", pr_samples, "colzani alpha samples");
  pr_cmd->add_option("--terms", pr_terms, "colzani series terms");
  pr_cmd->add_option("--log-power", pr_logp, "Phi log power");
  pr_cmd->add_option("--loglog-power", pr_loglogp, "Phi loglog power");
  pr_cmd->add_option("--max-unstable", pr_maxunstable,
                     "declared unstable fraction");

  // report
  auto* re_cmd = app.add_subcommand("report", "replot a stored trace CSV");
  std::string re_in;
  re_cmd->add_option("--in", re_in, "input CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    PrecisionContext ctx;
    ctx.bits = bits;
    ctx.tol = tol;
    ctx.validate();
    const std::string name = app.get_subcommands().front()->get_name();
    Runner runner(name, ctx, seed, out);
    if (ba_cmd->parsed())
      return cmd_best_approx(runner, ba_alpha, ba_mmax, ba_method);
    if (ex_cmd->parsed()) return cmd_exponents(runner, ex_alpha, ex_mmax, ex_qmax);
    if (po_cmd->parsed())
      return cmd_poincare(runner, po_a, po_t0, po_nmax, po_grid, po_f2,
                          po_f2_nmax);
    if (pe_cmd->parsed()) return cmd_pell(runner, pe_d, pe_n, pe_a, pe_itmax);
    if (ko_cmd->parsed())
      return cmd_kochergin(runner, ko_alpha, ko_sigma, ko_kmax, ko_mmax,
                           ko_certify, ko_tfrom, ko_tto);
    if (sm_cmd->parsed())
      return cmd_smooth(runner, sm_alpha, sm_d, sm_terms, sm_mmax, sm_tmax,
                        sm_certify);
    if (kk_cmd->parsed())
      return cmd_koksma(runner, kk_alpha, kk_tmax, kk_f, kk_coeff);
    if (pr_cmd->parsed()) {
      if (pr_kind == "weyl")
        return cmd_probe_weyl(runner, pr_alpha, pr_tlist, pr_f, pr_coeff,
                              pr_threshold);
      if (pr_kind == "sidorov")
        return cmd_probe_sidorov(runner, pr_alpha, pr_qmax, pr_xgrid, pr_f,
                                 pr_coeff, pr_sid_threshold);
      if (pr_kind == "integral")
        return cmd_probe_integral(runner, pr_dim, pr_box, pr_t, pr_quad);
      if (pr_kind == "window")
        return cmd_probe_window(runner, pr_a, pr_q, pr_ts);
      if (pr_kind == "special")
        return cmd_probe_special(runner, pr_alpha, pr_c, pr_gamma, pr_mcap,
                                 pr_qlist, pr_sgrid);
      if (pr_kind == "colzani")
        return cmd_probe_colzani(runner, pr_col_tmax, pr_col_grid, pr_samples,
                                 pr_terms, pr_logp, pr_loglogp,
                                 pr_maxunstable);
      throw UsageError("unknown probe kind: " + pr_kind);
    }
    if (re_cmd->parsed()) return cmd_report(runner, re_in);
    throw UsageError("no subcommand");
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

}  // namespace kron
