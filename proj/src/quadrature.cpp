#include "kron/quadrature.hpp"

#include <cmath>
#include <vector>

namespace kron {

QuadratureResult tanh_sinh(const std::function<Real(const Real&)>& f,
                           const Real& a, const Real& b,
                           const Real& target_abs_err, int max_level) {
  const Real half = (b - a) / 2;
  const Real mid = (a + b) / 2;
  const Real piq = pi_value() / 2;
  // Node weight underflows past this point; abscissas are within one ulp of
  // the endpoints anyway.
  const Real cutoff = ldexp(Real(1), -static_cast<int>(
      mpfr_get_prec(Real(1).backend().data())) - 16);

  auto node_sum = [&](const Real& h, bool odd_only) {
    // Sums w(kh) * f(x(kh)) over k (k odd only when refining a halved step).
    Real s = 0;
    const int kstep = odd_only ? 2 : 1;
    const int kfirst = odd_only ? 1 : 0;
    for (int k = kfirst;; k += kstep) {
      Real t = h * k;
      Real sh = piq * sinh(t);
      Real ch = cosh(sh);
      Real w = piq * cosh(t) / (ch * ch);
      Real y = half / (exp(sh) * ch);  // distance from the + endpoint
      if (k > 0 && w * 2 < cutoff) break;
      Real xp = b - y;
      Real xm = a + y;
      if (k == 0) {
        s += w * f(mid);
      } else {
        s += w * (f(xp) + f(xm));
      }
      if (k > (1 << 24)) throw QuadratureUnstable("tanh_sinh: node cap hit");
    }
    return s;
  };

  Real h = 1;
  Real sum = node_sum(h, false);
  Real prev = half * h * sum;
  for (int level = 1; level <= max_level; ++level) {
    h /= 2;
    sum += node_sum(h, true);
    Real cur = half * h * sum;
    Real delta = abs(cur - prev);
    if (level >= 3 && delta <= target_abs_err)
      return {cur, delta, level};
    prev = cur;
  }
  throw QuadratureUnstable("tanh_sinh: no convergence at max_level");
}

double simpson_refine(const std::function<double(double)>& f, double a,
                      double b, double target_abs_err, int start_panels,
                      int max_level) {
  auto composite = [&](long long panels) {
    const double h = (b - a) / static_cast<double>(panels);
    double s = f(a) + f(b);
    for (long long i = 1; i < panels; ++i)
      s += f(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
  };
  long long panels = start_panels;
  double prev = composite(panels);
  for (int level = 1; level <= max_level; ++level) {
    panels *= 2;
    double cur = composite(panels);
    if (std::abs(cur - prev) <= target_abs_err) return cur;
    prev = cur;
  }
  throw QuadratureUnstable("simpson_refine: no convergence at max_level");
}

}  // namespace kron
