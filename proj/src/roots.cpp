#include "yieldflow/roots.hpp"

#include <algorithm>
#include <cmath>

namespace yieldflow {

double solve_bracketed(const std::function<double(double)>& f,
                       const std::function<double(double)>& df,
                       double lo, double hi, const RootOptions& opt) {
  if (lo > hi) std::swap(lo, hi);
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0)
    throw std::invalid_argument("solve_bracketed: endpoints do not bracket a root");

  // Orient so that f(a) < 0 < f(b).
  double a = lo, b = hi;
  if (flo > 0.0) std::swap(a, b);

  double x = opt.has_guess ? std::clamp(opt.guess, lo, hi) : 0.5 * (lo + hi);
  double fx = f(x);
  for (int it = 0; it < opt.max_iter; ++it) {
    if (fx == 0.0 || std::abs(fx) <= opt.ftol) return x;
    if (fx < 0.0) a = x; else b = x;

    const double width = std::abs(b - a);
    if (width <= opt.xtol * std::max(1.0, std::abs(x))) return x;

    double next = 0.0;
    bool ok = false;
    if (df) {
      const double d = df(x);
      if (d != 0.0 && std::isfinite(d)) {
        next = x - fx / d;
        const double nlo = std::min(a, b), nhi = std::max(a, b);
        // accept Newton only when it stays strictly inside the bracket
        ok = next > nlo && next < nhi;
      }
    }
    if (!ok) next = 0.5 * (a + b);
    x = next;
    fx = f(x);
  }
  return x;
}

GoldenResult golden_minimize(const std::function<double(double)>& f,
                             double lo, double hi, double xtol, int max_iter) {
  const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  GoldenResult r;
  r.x = 0.5 * (a + b);
  r.value = f(r.x);
  return r;
}

}  // namespace yieldflow
