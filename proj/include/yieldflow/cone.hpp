#pragma once

#include <array>

#include "yieldflow/profiles.hpp"

namespace yieldflow {

// Bounds on derivatives of the chart L (see ConeChart):
//   |grad L|^2 <= gradient_sq                    everywhere in the cone,
//   L * d2L/dz2 <= vertical, L * d2L/dy2 <= horizontal,
// so L * (Laplacian of L) <= vertical + horizontal and
//   0 <= Laplacian of L^2 <= 2 (gradient_sq + vertical + horizontal).
struct ChartBounds {
  double gradient_sq = 0.0;   // 1 + ((lambda-1)/scale)^2
  double vertical = 0.0;
  double horizontal = 0.0;
  double max_second_half = 0.0;  // max of profile_second over |y| <= 1/2
  double slope_at_half = 0.0;    // |profile_slope(1/2)|
};

// Scaling chart of the family of nested profile curves z = L * phi(y/L)
// filling the open cone 0 < |y| < z*lambda/scale below the origin.  L(y, z)
// is the unique scale whose curve passes through (y, z); it grows with depth
// and equals |y| on the cone edge.
class ConeChart {
 public:
  explicit ConeChart(double lambda);

  const ProfileParams& params() const { return p_; }
  const ChartBounds& bounds() const { return bounds_; }

  // Half-width of the open cone at depth z < 0.
  double halfwidth(double z) const { return z * p_.lambda / p_.scale; }

  // Strict membership in the open cone (the axis y = 0 is outside).
  bool contains(double y, double z) const;

  // Chart value at a point of the closed cone (z < 0; the axis included).
  // An optional guess warm-starts the iteration for nearby repeated solves.
  double solve_scale(double y, double z, const double* guess = nullptr) const;

  // (dL/dy, dL/dz); the first component is odd in y, |dL/dy| <= 1, and
  // dL/dz < 0 with |dL/dz| <= (lambda-1)/|scale|.
  std::array<double, 2> scale_gradient(double y, double z) const;

  // Unit flow-alignment field q = (-phi'(t), 1)/sqrt(1+phi'(t)^2), t = y/L:
  // (0,1) on the axis, (-sign y, 0) on the cone edge; satisfies
  // -div(|z| q) = lambda inside the cone.
  std::array<double, 2> transport_field(double y, double z) const;

  // Central-difference residual  d/dy(|z| q1) + d/dz(|z| q2) + lambda  at
  // step h; all stencil points must stay inside the closed cone.
  double divergence_residual(double y, double z, double h) const;

  // c = 1/sqrt(1+phi'(t)^2) and s = phi'(t)/sqrt(1+phi'(t)^2) at t = y/L;
  // exposed so callers holding a chart value can form the field cheaply.
  std::array<double, 2> direction_parts(double t) const;

 private:
  ProfileParams p_;
  ChartBounds bounds_;
};

}  // namespace yieldflow
