#include "yieldflow/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "yieldflow/roots.hpp"

namespace yieldflow {

namespace {

// Stable pieces of x = (lambda^2-1) Z - lambda:
//   1 - x = (lambda^2-1) (1/(lambda-1) - Z)
//   1 + x = (lambda-1) ((lambda+1) Z - 1)
// Both products avoid the catastrophic cancellation the direct form suffers
// near the endpoint x = 1, where asin amplifies any error like 1/sqrt(1-x).
struct MapPoint {
  double one_minus_x;
  double one_plus_x;
  double x;
};

MapPoint split_x(double lambda, double Z) {
  const double mu = (lambda - 1.0) * (lambda + 1.0);
  MapPoint m;
  m.one_minus_x = mu * (1.0 / (lambda - 1.0) - Z);
  m.one_plus_x = (lambda - 1.0) * ((lambda + 1.0) * Z - 1.0);
  m.x = m.one_minus_x < 0.5 ? 1.0 - m.one_minus_x : mu * Z - lambda;
  return m;
}

double checked_lambda(double lambda, const char* who) {
  if (!(lambda > 1.0))
    throw std::domain_error(std::string(who) + ": load lambda must exceed 1");
  return lambda;
}

double clamp_Z(double lambda, double Z, const char* who) {
  const double zl = 1.0 / lambda;
  const double zr = 1.0 / (lambda - 1.0);
  const double slack = 1e-12 * std::max(1.0, zr);
  if (Z < zl - slack || Z > zr + slack)
    throw std::domain_error(std::string(who) + ": Z outside [1/lambda, 1/(lambda-1)]");
  return std::clamp(Z, zl, zr);
}

}  // namespace

double profile_map(double lambda, double Z) {
  checked_lambda(lambda, "profile_map");
  Z = clamp_Z(lambda, Z, "profile_map");
  const double mu = (lambda - 1.0) * (lambda + 1.0);
  const MapPoint m = split_x(lambda, Z);
  const double omx = std::max(m.one_minus_x, 0.0);
  const double opx = std::max(m.one_plus_x, 0.0);
  const double asin_x = m.x > 0.5
                            ? std::numbers::pi / 2.0 - 2.0 * std::asin(std::sqrt(0.5 * omx))
                            : std::asin(std::clamp(m.x, -1.0, 1.0));
  const double root = std::sqrt(omx * opx);
  return (asin_x - lambda * root) / (mu * std::sqrt(mu));
}

double profile_map_derivative(double lambda, double Z) {
  checked_lambda(lambda, "profile_map_derivative");
  Z = clamp_Z(lambda, Z, "profile_map_derivative");
  const double mu = (lambda - 1.0) * (lambda + 1.0);
  const MapPoint m = split_x(lambda, Z);
  const double omx = std::max(m.one_minus_x, 0.0);
  const double opx = std::max(m.one_plus_x, 0.0);
  return (lambda * Z - 1.0) * std::sqrt(mu) / std::sqrt(omx * opx);
}

double profile_map_inverse(double lambda, double v, double tol, const double* guess) {
  checked_lambda(lambda, "profile_map_inverse");
  const double zl = 1.0 / lambda;
  const double zr = 1.0 / (lambda - 1.0);
  const double lo = profile_map(lambda, zl);
  const double hi = profile_map(lambda, zr);
  const double slack = 1e-12 * std::max(1.0, hi - lo);
  if (v < lo - slack || v > hi + slack)
    throw std::domain_error("profile_map_inverse: value outside the map range");
  // Snap round-off-level proximity to the exact endpoints; keeps the profile
  // extrema identities exact even though the map is flat/steep there.
  if (v <= lo + 0.0) return zl;
  if (v >= hi - 0.0) return zr;

  RootOptions opt;
  opt.xtol = tol;
  if (guess && *guess > zl && *guess < zr) {
    opt.guess = *guess;
    opt.has_guess = true;
  }
  auto f = [&](double Z) { return profile_map(lambda, Z) - v; };
  auto df = [&](double Z) { return profile_map_derivative(lambda, Z); };
  return solve_bracketed(f, df, zl, zr, opt);
}

ProfileParams make_profile_params(double lambda) {
  checked_lambda(lambda, "make_profile_params");
  ProfileParams p;
  p.lambda = lambda;
  p.z_lo = 1.0 / lambda;
  p.z_hi = 1.0 / (lambda - 1.0);
  p.map_lo = profile_map(lambda, p.z_lo);
  p.map_hi = profile_map(lambda, p.z_hi);
  p.halfspan = p.map_hi - p.map_lo;
  p.scale = -1.0 / p.halfspan;
  p.center_depth = p.scale * p.z_hi;
  p.wall_depth = p.scale * p.z_lo;
  return p;
}

namespace {

double checked_y(double y, const char* who) {
  if (std::abs(y) > 1.0 + 1e-12)
    throw std::domain_error(std::string(who) + ": |y| must be <= 1");
  return std::clamp(y, -1.0, 1.0);
}

}  // namespace

double profile_value(const ProfileParams& p, double y) {
  y = checked_y(y, "profile_value");
  const double ay = std::abs(y);
  // v = map_hi + ay/scale written as map_lo + halfspan*(1-ay): exact at both
  // endpoints, no cancellation near ay = 1.
  const double v = p.map_lo + p.halfspan * (1.0 - ay);
  const double Z = profile_map_inverse(p.lambda, v);
  return p.scale * Z;
}

double profile_slope(const ProfileParams& p, double y) {
  y = checked_y(y, "profile_slope");
  if (y == 0.0) return 0.0;
  const double ph = profile_value(p, y);
  const double c = p.lambda - p.scale / ph;  // = 1/sqrt(1+phi'^2), in (0, 1]
  const double t = (1.0 - c) * (1.0 + c) / (c * c);
  const double s = std::sqrt(std::max(t, 0.0));
  return y > 0.0 ? s : -s;
}

double profile_second(const ProfileParams& p, double y) {
  y = checked_y(y, "profile_second");
  const double dp = profile_slope(p, y);
  const double s2 = 1.0 + dp * dp;
  return s2 * (p.lambda * std::sqrt(s2) - 1.0) / (-profile_value(p, y));
}

double profile_ode_residual(const ProfileParams& p, double y) {
  y = checked_y(y, "profile_ode_residual");
  const double ph = profile_value(p, y);
  const double dp = profile_slope(p, y);
  const double d2 = profile_second(p, y);
  const double s2 = 1.0 + dp * dp;
  return ph * d2 / (s2 * std::sqrt(s2)) - 1.0 / std::sqrt(s2) + p.lambda;
}

}  // namespace yieldflow
