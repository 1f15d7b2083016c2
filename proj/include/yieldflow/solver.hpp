#pragma once

#include <optional>

#include "yieldflow/barriers.hpp"
#include "yieldflow/grid.hpp"
#include "yieldflow/kernels.hpp"

namespace yieldflow {

// Configuration of one regularized solve on the truncated strip.
struct SolveSpec {
  double lambda = 0.0;   // dimensionless load, >= 0
  int ny = 129;
  int nz = 513;
  double depth = 0.0;    // <= 0 requests the automatic truncation rule
  double eps0 = 1.0;     // first regularization parameter
  double eps_min = 1e-4; // last one (always appended exactly)
  double eps_ratio = 0.25;
  double tol = 1e-3;     // Euler-Lagrange residual target, scaled by max(1, lambda)
  int max_outer = 400;   // lagged-diffusivity steps per epsilon stage
  double cg_tol = 1e-10; // floor of the inner CG solves, relative to |b|
  int cg_max = 50000;
  double inexact = 0.2;  // inner target = max(cg_tol*|b|, inexact*|outer residual|)
  bool nested = true;    // warm-start from factor-2 coarser grids when possible
  kernels::Backend backend = kernels::Backend::parallel;
  double threshold_factor = 1e-2;  // support threshold = factor * max u
};

struct SolveResult {
  GridField grid;
  SolveReport report;
};

// Truncation depth 1.25 * b * |scale1| / (lambda1-1) from the optimized
// supersolution (the outer support curve fits with 25% margin); a fixed
// fallback depth for subcritical loads, where the solution vanishes anyway.
double auto_depth(double lambda);

// Minimize the regularized energy by warm-started epsilon continuation;
// each stage runs lagged-diffusivity fixed-point steps whose linear systems
// are solved by Jacobi-preconditioned conjugate gradients.
SolveResult solve(const SolveSpec& spec);

double discrete_energy(const GridField& g, double eps, double lambda,
                       kernels::Backend be = kernels::Backend::serial);

// Scaled max-norm residual of the discrete Euler-Lagrange system at u.
double el_residual(const GridField& g, double eps, double lambda,
                   kernels::Backend be = kernels::Backend::serial);

// Nodal unit-capped flux direction q = grad u / sqrt(eps^2 + |grad u|^2),
// cell values averaged to nodes.
struct NodalFlux {
  std::vector<double> q1, q2;
};
NodalFlux recover_flux(const GridField& g, double eps);

// Marching-squares contour of {u = threshold}, chained into polylines, and
// the thresholded area by cell counting.
struct SupportContour {
  std::vector<std::array<double, 2>> points;
  std::vector<int> offsets;  // chain start indices, terminated by points.size()
  double area = 0.0;
};
SupportContour extract_support(const GridField& g, double threshold);

// Node-by-node comparison of a solve against the barrier pair.
struct SandwichReport {
  double slack = 0.0;
  long checked = 0;
  long sub_violations = 0;    // u < subsolution - slack
  long super_violations = 0;  // u > supersolution + slack
  double max_sub_gap = 0.0;   // worst positive (subsolution - u)
  double max_super_gap = 0.0; // worst positive (u - supersolution)
};
SandwichReport verify_sandwich(const GridField& g, const BarrierPair& bp, double slack);

// Calibrated slack factor: slack = factor * (max(hy, hz) + eps_min).
inline constexpr double kSandwichSlackFactor = 1.0;
double sandwich_slack(const GridField& g, double eps_min);

}  // namespace yieldflow
