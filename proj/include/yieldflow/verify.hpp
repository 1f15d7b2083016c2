#pragma once

#include <array>
#include <vector>

#include "yieldflow/barriers.hpp"

namespace yieldflow {

// Finite-difference verification of the two barrier differential
// inequalities, in weak (variational) form, on a uniform lattice of spacing
// h covering the strip down past the outer support curve:
//
//   subsolution:    [A1 u_sub + G(|z| d)]_n / h^2  <=  lambda + slack
//   supersolution:  [A1 U     + G(|z| q)]_n / h^2  >=  lambda - slack
//
// where A1 is the unweighted five-cell stiffness gather and G the matching
// gather of cell-centered flux vectors.  A node is skipped when its four
// surrounding cell centers do not lie in a single smooth region of the
// barrier (the inequalities hold only distributionally across the interface
// curves, so the natural exclusion is this one-cell tube), or when it lies
// within a small disk around the cone apex at the origin, where the chart
// degenerates.
struct BarrierGridReport {
  double h = 0.0;
  double slack = 0.0;
  double depth = 0.0;          // lattice depth used
  long sub_checked = 0;
  long sub_violations = 0;     // operator value > lambda + slack
  long sub_skipped = 0;
  double sub_max = 0.0;        // largest subsolution operator value seen
  long super_checked = 0;
  long super_violations = 0;   // operator value < lambda - slack
  long super_skipped = 0;
  double super_min = 0.0;      // smallest supersolution operator value seen
};

BarrierGridReport check_barrier_inequalities(const BarrierPair& bp, double h,
                                             double slack);

// Placement check of an extracted yield contour against the barrier support
// curves.  Vertices within two cells of the walls or of the free surface are
// not counted: the thresholded support legitimately hugs the walls up to the
// surface there, while the yield curve statements concern the deep boundary.
struct ContourBandReport {
  long checked = 0;
  long outside_band = 0;       // vertices beyond either curve + 2 hz
  double max_above_inner = 0.0;  // worst z - (inner(y) + 2 hz), positive = bad
  double max_below_outer = 0.0;  // worst (outer(y) - 2 hz) - z, positive = bad
  double shallowest_z = 0.0;     // max z among counted vertices
  bool depth_ok = false;         // shallowest_z <= wall depth of inner curve + 2 hz
};

ContourBandReport check_contour_band(const std::vector<std::array<double, 2>>& points,
                                     const BarrierPair& bp, double hy, double hz);

}  // namespace yieldflow
