#include "yieldflow/barriers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "yieldflow/roots.hpp"

namespace yieldflow {

namespace {

void check_pair(double lambda, double lambda1, const char* who) {
  if (!(lambda > 1.0))
    throw std::domain_error(std::string(who) + ": load lambda must exceed 1");
  if (!(lambda1 > lambda))
    throw std::domain_error(std::string(who) + ": auxiliary load must exceed lambda");
}

}  // namespace

SupersolutionParams make_supersolution_params(double lambda, double lambda1) {
  check_pair(lambda, lambda1, "make_supersolution_params");
  const ProfileParams p1 = make_profile_params(lambda1);
  const double r = (lambda1 - 1.0) / p1.scale;
  SupersolutionParams s;
  s.lambda1 = lambda1;
  s.theta = (lambda1 - lambda) / (2.0 * (1.0 + r * r));
  s.b = 1.0 + std::sqrt(lambda1 / (2.0 * s.theta));
  return s;
}

double pi_gap(double lambda, double lambda1) {
  check_pair(lambda, lambda1, "pi_gap");
  const SupersolutionParams s = make_supersolution_params(lambda, lambda1);
  const ProfileParams p1 = make_profile_params(lambda1);
  const ProfileParams p = make_profile_params(lambda);
  return -p1.scale / (lambda1 - 1.0) * s.b + p.scale / (lambda - 1.0);
}

Lambda1Result optimize_lambda1(double lambda, double xtol) {
  if (!(lambda > 1.0))
    throw std::domain_error("optimize_lambda1: load lambda must exceed 1");
  // Walk a geometric ladder of offsets until the gap starts growing again.
  std::vector<double> xs, fs;
  double t = 1e-3;
  double best = std::numeric_limits<double>::infinity();
  int best_i = -1;
  while (true) {
    const double l1 = lambda * (1.0 + t);
    if (l1 > 1e3 * lambda)
      throw convergence_error("optimize_lambda1: no interior minimum found");
    xs.push_back(l1);
    fs.push_back(pi_gap(lambda, l1));
    const int i = static_cast<int>(xs.size()) - 1;
    if (fs[i] < best) {
      best = fs[i];
      best_i = i;
    } else if (i >= 2 && best_i >= 1 && best_i < i) {
      break;  // V-shape bracketed: fs[best_i-1] > fs[best_i] < fs[i]
    }
    t *= 1.8;
  }
  Lambda1Result r;
  r.bracket_lo = xs[best_i - 1];
  r.bracket_hi = xs[best_i + 1];
  const GoldenResult g = golden_minimize(
      [&](double l1) { return pi_gap(lambda, l1); }, r.bracket_lo, r.bracket_hi, xtol);
  r.lambda1 = g.x;
  r.pi = g.value;
  return r;
}

double max_zeta0(double lambda, double lambda0) {
  if (!(lambda > 1.0))
    throw std::domain_error("max_zeta0: load lambda must exceed 1");
  if (!(lambda0 > 1.0 && lambda0 < lambda))
    throw std::domain_error("max_zeta0: auxiliary load must lie in (1, lambda)");
  const ConeChart chart(lambda0);
  const ChartBounds& b = chart.bounds();
  return (lambda - lambda0) / (2.0 * (b.gradient_sq + b.vertical + b.horizontal));
}

BarrierPair::BarrierPair(double lambda, double lambda1, double lambda0)
    : lambda_(lambda),
      super_(make_supersolution_params(
          lambda, lambda1 > 0.0 ? lambda1 : optimize_lambda1(lambda).lambda1)),
      load_(make_profile_params(lambda)),
      chart0_(lambda0 > 0.0 ? lambda0 : 0.5 * (1.0 + lambda)),
      chart1_(super_.lambda1) {
  zeta0_ = max_zeta0(lambda, chart0_.params().lambda);
}

namespace {

void check_point(double y, double z, const char* who) {
  if (std::abs(y) > 1.0 + 1e-12 || z > 1e-12)
    throw std::domain_error(std::string(who) + ": point outside the strip");
}

}  // namespace

double BarrierPair::subsolution(double y, double z) const {
  check_point(y, z, "subsolution");
  y = std::clamp(y, -1.0, 1.0);
  z = std::min(z, 0.0);
  if (z == 0.0 || std::abs(y) >= chart0_.halfwidth(z))
    return zeta0_ * (1.0 - y * y);
  const double L = chart0_.solve_scale(y, z);
  return L >= 1.0 ? 0.0 : zeta0_ * (1.0 - L * L);
}

std::array<double, 2> BarrierPair::subsolution_direction(double y, double z) const {
  check_point(y, z, "subsolution_direction");
  y = std::clamp(y, -1.0, 1.0);
  z = std::min(z, 0.0);
  if (z < 0.0 && std::abs(y) < chart0_.halfwidth(z))
    return chart0_.transport_field(y, z);  // includes the axis -> (0, 1)
  if (y == 0.0) return {0.0, 0.0};         // surface apex, measure zero
  return {y > 0.0 ? -1.0 : 1.0, 0.0};
}

double BarrierPair::supersolution(double y, double z) const {
  check_point(y, z, "supersolution");
  y = std::clamp(y, -1.0, 1.0);
  z = std::min(z, 0.0);
  const double u1 = 0.5 * super_.lambda1 * (1.0 - y * y);
  if (z == 0.0 || z > profile_value(chart1_.params(), y)) return u1;
  const double L = chart1_.solve_scale(y, z);
  const double u2 =
      L >= super_.b ? 0.0 : super_.theta * (L - super_.b) * (L - super_.b);
  return std::min(u1, u2);
}

std::array<double, 2> BarrierPair::supersolution_direction(double y, double z) const {
  check_point(y, z, "supersolution_direction");
  y = std::clamp(y, -1.0, 1.0);
  z = std::min(z, 0.0);
  auto lateral = [](double yy) -> std::array<double, 2> {
    if (yy == 0.0) return {0.0, 0.0};  // on the axis jump set
    return {yy > 0.0 ? -1.0 : 1.0, 0.0};
  };
  if (z == 0.0 || z > profile_value(chart1_.params(), y)) return lateral(y);
  const double L = chart1_.solve_scale(y, z);
  const double contour =
      super_.b - std::sqrt(super_.lambda1 * (1.0 - y * y) / (2.0 * super_.theta));
  if (L < contour) return lateral(y);
  return chart1_.transport_field(y, z);
}

double BarrierPair::inner_curve(double y) const { return profile_value(load_, y); }

double BarrierPair::outer_curve(double y) const {
  return super_.b * profile_value(chart1_.params(), y / super_.b);
}

SupportCurves support_curves(const BarrierPair& bp, int n) {
  if (n < 2) throw std::domain_error("support_curves: need at least 2 samples");
  SupportCurves c;
  c.y.resize(n);
  c.inner.resize(n);
  c.outer.resize(n);
  for (int i = 0; i < n; ++i) {
    const double y = -1.0 + 2.0 * static_cast<double>(i) / (n - 1);
    c.y[i] = y;
    c.inner[i] = bp.inner_curve(y);
    c.outer[i] = bp.outer_curve(y);
  }
  return c;
}

}  // namespace yieldflow
