#include "yieldflow/oned.hpp"

#include <cmath>
#include <stdexcept>

#include "yieldflow/roots.hpp"

namespace yieldflow {

double solve_lambda_multiplier(double A, double m, double tol) {
  if (!(A > 0.0)) throw std::domain_error("solve_lambda_multiplier: weight A must be positive");
  if (!(m >= 0.0)) throw std::domain_error("solve_lambda_multiplier: volume m must be nonnegative");
  if (m == 0.0) return A;  // zero-volume solution is w == 0 with multiplier A

  const double s = A + m;
  auto g = [&](double x) { return 2.0 * x * x * x - 3.0 * x * x * s + A * A * A; };
  auto dg = [&](double x) { return 6.0 * x * (x - s); };

  // g(s) = A^3 - s^3 < 0 and g is increasing on [s, inf); double the width
  // until the far end turns positive.
  double hi = s + std::max(1.0, s);
  while (g(hi) <= 0.0) hi = s + 2.0 * (hi - s);

  RootOptions opt;
  opt.xtol = std::min(tol, 1e-14);
  return solve_bracketed(g, dg, s, hi, opt);
}

OneDSolution solve_oned(double A, double m, double tol) {
  OneDSolution s;
  s.weight = A;
  s.volume = m;
  s.multiplier = solve_lambda_multiplier(A, m, tol);
  s.plateau_halfwidth = A / s.multiplier;
  const double a = s.plateau_halfwidth;
  s.plateau_height = A * (a - 1.0) * (a - 1.0) / (2.0 * a);
  return s;
}

double profile_w(const OneDSolution& s, double y) {
  const double ay = std::abs(y);
  if (ay > 1.0) throw std::domain_error("profile_w: |y| must be <= 1");
  const double a = s.plateau_halfwidth;
  if (ay <= a) return s.plateau_height;
  return s.weight * (-ay * ay / (2.0 * a) + ay + 1.0 / (2.0 * a) - 1.0);
}

double subgradient_q(const OneDSolution& s, double y) {
  const double ay = std::abs(y);
  if (ay > 1.0) throw std::domain_error("subgradient_q: |y| must be <= 1");
  const double a = s.plateau_halfwidth;
  if (ay <= a) return -y / a;
  return y > 0.0 ? -1.0 : 1.0;
}

double minimal_energy(const OneDSolution& s) { return s.volume * s.multiplier; }

double energy_1d(std::span<const double> samples, double A) {
  if (!(A > 0.0)) throw std::domain_error("energy_1d: weight A must be positive");
  const std::size_t n = samples.size();
  if (n < 3) throw std::domain_error("energy_1d: need at least 3 samples");
  double scale = 1.0;
  for (double v : samples) scale = std::max(scale, std::abs(v));
  if (std::abs(samples.front()) > 1e-9 * scale || std::abs(samples.back()) > 1e-9 * scale)
    throw std::domain_error("energy_1d: endpoint samples must vanish");

  const double h = 2.0 / static_cast<double>(n - 1);
  double e = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = (samples[i + 1] - samples[i]) / h;
    e += h * (0.5 * d * d + A * std::abs(d));
  }
  return e;
}

}  // namespace yieldflow
