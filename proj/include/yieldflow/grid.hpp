#pragma once

#include <array>
#include <vector>

namespace yieldflow {

// Uniform node grid on the truncated strip (-1, 1) x (-depth, 0).
// Node (i, j) sits at y = -1 + i*hy, z = -depth + j*hz; j = 0 is the bottom
// row, j = nz-1 the free surface z = 0.  Walls (i = 0, ny-1) and bottom carry
// homogeneous Dirichlet data; the surface row is free (natural condition).
struct GridField {
  int ny = 0;
  int nz = 0;
  double depth = 0.0;
  std::vector<double> u;

  GridField() = default;
  GridField(int ny_, int nz_, double depth_)
      : ny(ny_), nz(nz_), depth(depth_), u(static_cast<std::size_t>(ny_) * nz_, 0.0) {}

  double hy() const { return 2.0 / (ny - 1); }
  double hz() const { return depth / (nz - 1); }
  double y(int i) const { return -1.0 + i * hy(); }
  double z(int j) const { return -depth + j * hz(); }
  int index(int i, int j) const { return j * ny + i; }
  bool dirichlet(int i, int j) const { return i == 0 || i == ny - 1 || j == 0; }
  int cells_y() const { return ny - 1; }
  int cells_z() const { return nz - 1; }
};

struct SolveReport {
  double lambda = 0.0;
  std::vector<double> epsilons;   // stages executed on the reported grid
  int iters = 0;  // accepted lagged-diffusivity steps, all stages
  int warmup_iters = 0;  // steps spent on coarser grids of the nested hierarchy
  std::vector<int> iters_per_eps;
  double energy = 0.0;                 // final discrete energy at the last epsilon
  std::vector<double> energy_history;  // after every accepted step
  double el_residual = 0.0;            // scaled max-norm Euler-Lagrange residual
  double support_area = 0.0;
  double support_threshold = 0.0;
  double max_u = 0.0;
  std::vector<double> max_u_per_eps;
  double runtime_s = 0.0;
  std::vector<std::array<double, 2>> contour;  // chained free-boundary polyline
  std::vector<int> contour_offsets;            // chain starts into `contour`
};

}  // namespace yieldflow
