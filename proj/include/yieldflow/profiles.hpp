#pragma once

namespace yieldflow {

// Parameters of the self-similar yield-curve profile for a supercritical
// load lambda > 1.  The profile phi is the convex, even curve
//   phi(y) = scale * M_inverse(M(1/(lambda-1)) + |y|/scale),   y in [-1, 1],
// where M (profile_map below) is a strictly increasing map on
// [1/lambda, 1/(lambda-1)] and scale < 0.  phi rises from its minimum
// center_depth at y = 0 to wall_depth at y = +-1; both values are negative
// (depths below the free surface z = 0).
struct ProfileParams {
  double lambda = 0.0;        // dimensionless load, > 1
  double scale = 0.0;         // negative scaling constant ("K")
  double halfspan = 0.0;      // half-width of the unscaled profile = -1/scale
  double center_depth = 0.0;  // scale/(lambda-1) = phi(0), the minimum
  double wall_depth = 0.0;    // scale/lambda = phi(+-1), the maximum
  double z_lo = 0.0;          // 1/lambda, left end of the map domain
  double z_hi = 0.0;          // 1/(lambda-1), right end of the map domain
  double map_lo = 0.0;        // profile_map(lambda, z_lo)
  double map_hi = 0.0;        // profile_map(lambda, z_hi)
};

ProfileParams make_profile_params(double lambda);

// Strictly increasing map whose inverse generates the profile:
//   M(Z) = ( asin(x) - lambda*sqrt(1-x^2) ) / (lambda^2-1)^{3/2},
//   x = (lambda^2-1) Z - lambda,   Z in [1/lambda, 1/(lambda-1)].
// Evaluated in a form that stays fully accurate at the endpoint x = 1.
double profile_map(double lambda, double Z);

// dM/dZ = (lambda Z - 1) sqrt(lambda^2-1) / sqrt(1-x^2); zero at the left
// endpoint, +inf at the right one.
double profile_map_derivative(double lambda, double Z);

// Inverse of the map on [map_lo, map_hi]; bisection safeguarded by Newton.
// Values within a small slack of the range are clamped; beyond it -> domain
// error.  An optional guess accelerates repeated nearby solves.
double profile_map_inverse(double lambda, double v, double tol = 1e-15,
                           const double* guess = nullptr);

// Profile value/slope/second derivative at y in [-1, 1].  The slope is odd
// (exactly zero at y = 0) and diverges at the walls; the second derivative is
// strictly positive (the profile is strictly convex).
double profile_value(const ProfileParams& p, double y);
double profile_slope(const ProfileParams& p, double y);
double profile_second(const ProfileParams& p, double y);

// Residual of the curvature equation
//   phi * phi'' / (1+phi'^2)^{3/2} - 1/sqrt(1+phi'^2) + lambda = 0
// evaluated with the closed-form value/slope/second derivative.
double profile_ode_residual(const ProfileParams& p, double y);

}  // namespace yieldflow
