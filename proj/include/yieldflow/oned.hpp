#pragma once

#include <span>

namespace yieldflow {

// Closed-form minimizer of the one-dimensional channel energy
//   \int_{-1}^{1} |w'|^2/2 + A |w'|  dy    subject to   \int w = m,  w(\pm 1) = 0.
// The solution is a truncated parabola with a flat plateau |y| <= a.
struct OneDSolution {
  double weight = 0.0;            // A, coefficient of the |w'| term (> 0)
  double volume = 0.0;            // m, prescribed integral (>= 0)
  double multiplier = 0.0;        // Lagrange multiplier of the volume constraint
  double plateau_halfwidth = 0.0; // a = weight / multiplier, in (0, 1]
  double plateau_height = 0.0;    // w value on the plateau
};

// Multiplier as the root of 2 x^3 - 3 x^2 (A+m) + A^3 = 0 in [A+m, inf).
double solve_lambda_multiplier(double A, double m, double tol = 1e-12);

OneDSolution solve_oned(double A, double m, double tol = 1e-12);

// Profile value at y in [-1, 1].
double profile_w(const OneDSolution& s, double y);

// Normalized slope field paired with the profile: -y/|y| off the plateau,
// -y/a on it; satisfies q * w' = |w'| and |q| <= 1.
double subgradient_q(const OneDSolution& s, double y);

// Value m * multiplier of the gradient pairing int w'(w' + A q) dy at the
// minimizer: pairing the Euler-Lagrange equation -(w' + A q)' = multiplier
// with w itself turns the volume constraint into this identity.  Note the
// energy functional keeps only half of the quadratic term, so its infimum is
// smaller: m * multiplier - (multiplier - A)^3 / (3 multiplier).
double minimal_energy(const OneDSolution& s);

// Discrete energy of uniformly spaced samples on [-1, 1] (endpoints must be
// zero): per-cell forward differences with midpoint quadrature.
double energy_1d(std::span<const double> samples, double A);

}  // namespace yieldflow
