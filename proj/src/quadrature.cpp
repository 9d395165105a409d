#include "csflock/quadrature.hpp"

#include <cmath>

namespace csflock {
namespace {

struct Simpson {
  const std::function<double(double)>& f;

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                 int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }
};

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
  if (a == b) return 0.0;
  if (b < a) return -adaptive_simpson(f, b, a, tol, max_depth);
  // Split once up front so a peaked integrand is not missed by the first three samples.
  const Simpson s{f};
  double total = 0.0;
  constexpr int kPanels = 8;
  const double h = (b - a) / kPanels;
  for (int p = 0; p < kPanels; ++p) {
    const double lo = a + p * h;
    const double hi = (p + 1 == kPanels) ? b : lo + h;
    const double flo = f(lo);
    const double fmid = f(0.5 * (lo + hi));
    const double fhi = f(hi);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    total += s.recurse(lo, hi, flo, fmid, fhi, whole, tol / kPanels, max_depth);
  }
  return total;
}

double adaptive_simpson_to_infinity(const std::function<double(double)>& f, double a, double tol) {
  const std::function<double(double)> g = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double one_minus = 1.0 - t;
    const double value = f(a + t / one_minus) / (one_minus * one_minus);
    return std::isfinite(value) ? value : 0.0;
  };
  return adaptive_simpson(g, 0.0, 1.0, tol);
}

}  // namespace csflock
