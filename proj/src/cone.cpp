#include "yieldflow/cone.hpp"

#include <cmath>
#include <stdexcept>

#include "yieldflow/roots.hpp"

namespace yieldflow {

namespace {

// max of profile_second over |y| <= 1/2 by dense sampling plus a local
// golden-section polish around the sampled argmax (the curve is even, so
// scanning [0, 1/2] suffices; monotonicity is not assumed).
double scan_max_second(const ProfileParams& p) {
  const int n = 10000;
  double best = 0.0;
  double best_y = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double y = 0.5 * static_cast<double>(i) / n;
    const double v = profile_second(p, y);
    if (v > best) {
      best = v;
      best_y = y;
    }
  }
  const double h = 0.5 / n;
  const double lo = std::max(0.0, best_y - h);
  const double hi = std::min(0.5, best_y + h);
  const GoldenResult g =
      golden_minimize([&](double y) { return -profile_second(p, y); }, lo, hi, 1e-12);
  return std::max(best, -g.value);
}

ChartBounds compute_bounds(const ProfileParams& p) {
  ChartBounds b;
  const double lam = p.lambda;
  const double negK = -p.scale;
  b.gradient_sq = 1.0 + ((lam - 1.0) / p.scale) * ((lam - 1.0) / p.scale);
  b.max_second_half = scan_max_second(p);
  b.slope_at_half = std::abs(profile_slope(p, 0.5));
  const double cap = std::pow(1.0 / (b.slope_at_half * b.slope_at_half) + 1.0, 1.5);
  const double r = lam / negK;
  b.vertical = std::max(0.25 * r * r * r * b.max_second_half,
                        2.0 * lam * lam / negK * cap);
  b.horizontal = std::max(r * b.max_second_half,
                          8.0 * (lam / (lam - 1.0)) * (lam / (lam - 1.0)) * negK * cap);
  return b;
}

}  // namespace

ConeChart::ConeChart(double lambda)
    : p_(make_profile_params(lambda)), bounds_(compute_bounds(p_)) {}

bool ConeChart::contains(double y, double z) const {
  if (!(z < 0.0)) return false;
  const double ay = std::abs(y);
  return ay > 0.0 && ay < halfwidth(z);
}

double ConeChart::solve_scale(double y, double z, const double* guess) const {
  if (!(z < 0.0))
    throw std::domain_error("solve_scale: the cone lies below the surface (z < 0)");
  const double ay = std::abs(y);
  const double w = halfwidth(z);
  if (ay > w * (1.0 + 1e-9) + 1e-300)
    throw std::domain_error("solve_scale: point outside the closed cone");

  const double axis_scale = z * (p_.lambda - 1.0) / p_.scale;  // L on the axis
  if (ay <= 1e-15 * axis_scale) return axis_scale;

  double lo = std::max(ay, axis_scale) * (1.0 - 1e-12);
  double hi = (ay + axis_scale) * (1.0 + 1e-12);
  auto g = [&](double L) { return L * profile_value(p_, y / L) - z; };
  // d/dL [L phi(y/L)] = phi(t) - t phi'(t), t = y/L
  auto dg = [&](double L) {
    const double t = y / L;
    return profile_value(p_, t) - t * profile_slope(p_, t);
  };
  if (g(lo) <= 0.0) return lo;   // on (or round-off past) the cone edge
  if (g(hi) >= 0.0) return hi;

  RootOptions opt;
  opt.xtol = 5e-15;
  if (guess && *guess > lo && *guess < hi) {
    opt.guess = *guess;
    opt.has_guess = true;
  }
  return solve_bracketed(g, dg, lo, hi, opt);
}

std::array<double, 2> ConeChart::direction_parts(double t) const {
  const double ph = profile_value(p_, t);
  const double c = std::clamp(p_.lambda - p_.scale / ph, 0.0, 1.0);
  const double s = std::sqrt(std::max((1.0 - c) * (1.0 + c), 0.0));
  return {t >= 0.0 ? s : -s, c};
}

std::array<double, 2> ConeChart::scale_gradient(double y, double z) const {
  const double L = solve_scale(y, z);
  const double t = y / L;
  const auto [s, c] = direction_parts(t);
  const double denom = t * s - profile_value(p_, t) * c;  // > 0
  return {s / denom, -c / denom};
}

std::array<double, 2> ConeChart::transport_field(double y, double z) const {
  const double L = solve_scale(y, z);
  const auto [s, c] = direction_parts(y / L);
  return {-s, c};
}

double ConeChart::divergence_residual(double y, double z, double h) const {
  auto flux = [&](double yy, double zz) {
    const auto q = transport_field(yy, zz);
    return std::array<double, 2>{-zz * q[0], -zz * q[1]};
  };
  const double dy = (flux(y + h, z)[0] - flux(y - h, z)[0]) / (2.0 * h);
  const double dz = (flux(y, z + h)[1] - flux(y, z - h)[1]) / (2.0 * h);
  return dy + dz + p_.lambda;
}

}  // namespace yieldflow
