#include "yieldflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace yieldflow {

namespace {

struct CellData {
  std::vector<int> region;       // smooth-region label per cell
  std::vector<double> f1, f2;    // cell-centered flux |z_c| * d(y_c, z_c)
};

std::array<double, 2> lateral(double y) {
  if (y == 0.0) return {0.0, 0.0};
  return {y > 0.0 ? -1.0 : 1.0, 0.0};
}

// Subsolution regions: 0 outside the cone at lambda0, 1 in-cone above the
// base curve (L < 1), 2 in-cone below it (u = 0).
CellData sub_cells(const BarrierPair& bp, int ncy, int ncz, double h) {
  const ConeChart& c0 = bp.chart0();
  CellData d;
  const std::size_t nc = static_cast<std::size_t>(ncy) * ncz;
  d.region.assign(nc, 0);
  d.f1.assign(nc, 0.0);
  d.f2.assign(nc, 0.0);
  for (int ic = 0; ic < ncy; ++ic) {
    const double y = -1.0 + (ic + 0.5) * h;
    double guess = 0.0;
    bool have_guess = false;
    for (int jc = ncz - 1; jc >= 0; --jc) {  // sweep down, warm-starting L
      const double z = -(ncz - jc - 0.5) * h;
      const std::size_t c = static_cast<std::size_t>(jc) * ncy + ic;
      const double az = -z;
      if (std::abs(y) >= c0.halfwidth(z)) {
        d.region[c] = 0;
        const auto q = lateral(y);
        d.f1[c] = az * q[0];
        d.f2[c] = az * q[1];
        have_guess = false;
        continue;
      }
      const double L = c0.solve_scale(y, z, have_guess ? &guess : nullptr);
      guess = L;
      have_guess = true;
      d.region[c] = L < 1.0 ? 1 : 2;
      const auto [s, cc] = c0.direction_parts(y / L);
      d.f1[c] = az * -s;
      d.f2[c] = az * cc;
    }
  }
  return d;
}

// Supersolution regions: 0 paraboloid active (above the lambda1 base curve
// or above the matching contour), 1 cap active (contour <= L < b), 2 rigid
// (L >= b, U = 0).
CellData super_cells(const BarrierPair& bp, int ncy, int ncz, double h) {
  const ConeChart& c1 = bp.chart1();
  const SupersolutionParams& sp = bp.super();
  CellData d;
  const std::size_t nc = static_cast<std::size_t>(ncy) * ncz;
  d.region.assign(nc, 0);
  d.f1.assign(nc, 0.0);
  d.f2.assign(nc, 0.0);
  for (int ic = 0; ic < ncy; ++ic) {
    const double y = -1.0 + (ic + 0.5) * h;
    const double curve = profile_value(c1.params(), y);
    const double contour =
        sp.b - std::sqrt(sp.lambda1 * (1.0 - y * y) / (2.0 * sp.theta));
    double guess = 0.0;
    bool have_guess = false;
    for (int jc = ncz - 1; jc >= 0; --jc) {
      const double z = -(ncz - jc - 0.5) * h;
      const std::size_t c = static_cast<std::size_t>(jc) * ncy + ic;
      const double az = -z;
      if (z > curve) {
        d.region[c] = 0;
        const auto q = lateral(y);
        d.f1[c] = az * q[0];
        d.f2[c] = az * q[1];
        have_guess = false;
        continue;
      }
      const double L = c1.solve_scale(y, z, have_guess ? &guess : nullptr);
      guess = L;
      have_guess = true;
      if (L < contour) {
        d.region[c] = 0;
        const auto q = lateral(y);
        d.f1[c] = az * q[0];
        d.f2[c] = az * q[1];
      } else {
        d.region[c] = L < sp.b ? 1 : 2;
        const auto [s, cc] = c1.direction_parts(y / L);
        d.f1[c] = az * -s;
        d.f2[c] = az * cc;
      }
    }
  }
  return d;
}

struct SideResult {
  long checked = 0, violations = 0, skipped = 0;
  double extreme = 0.0;
};

// Weak-form operator value at every interior node for one barrier:
//   value_n = [A1 u + G(flux)]_n / h^2
// with A1 u from bilinear cell gradients of the nodal samples and G the
// corner-sign gather of the cell fluxes.  `want_upper` selects which side of
// lambda counts as a violation.
SideResult run_side(const std::vector<double>& u, const CellData& cd, int ny, int nz,
                    double h, double lambda, double slack, bool want_upper) {
  const int ncy = ny - 1;
  SideResult r;
  r.extreme = want_upper ? -std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::infinity();
  const double origin2 = 64.0 * h * h;  // skip the degenerate cone apex
  auto node_y = [&](int i) { return -1.0 + i * h; };
  auto node_z = [&](int nz_, int j) { return -(nz_ - 1 - j) * h; };
  for (int j = 1; j < nz - 1; ++j) {
    for (int i = 1; i < ny - 1; ++i) {
      const double y = node_y(i), z = node_z(nz, j);
      if (y * y + z * z < origin2) {
        ++r.skipped;
        continue;
      }
      const std::size_t c00 = static_cast<std::size_t>(j - 1) * ncy + (i - 1);
      const std::size_t c10 = c00 + 1;
      const std::size_t c01 = c00 + ncy;
      const std::size_t c11 = c01 + 1;
      const int reg = cd.region[c00];
      if (cd.region[c10] != reg || cd.region[c01] != reg || cd.region[c11] != reg) {
        ++r.skipped;
        continue;
      }
      double lhs = 0.0;
      // cell (ic, jc) contributes  sy*(gy/2 + f1/2) + sz*(gz/2 + f2/2)  per
      // corner with signs sy, sz; spacing h cancels into the final /h^2.
      const std::size_t cells[4] = {c00, c10, c01, c11};
      const int sy[4] = {+1, -1, +1, -1};  // node is NE, NW, SE, SW corner
      const int sz[4] = {+1, +1, -1, -1};
      for (int k = 0; k < 4; ++k) {
        const std::size_t c = cells[k];
        const int jc = static_cast<int>(c / ncy), ic = static_cast<int>(c % ncy);
        const std::size_t n = static_cast<std::size_t>(jc) * ny + ic;
        const double usw = u[n], use = u[n + 1], unw = u[n + ny], une = u[n + ny + 1];
        const double gy = (use + une - usw - unw) / (2.0 * h);
        const double gz = (unw + une - usw - use) / (2.0 * h);
        lhs += 0.5 * (sy[k] * (gy + cd.f1[c]) + sz[k] * (gz + cd.f2[c]));
      }
      const double val = lhs / h;
      ++r.checked;
      if (want_upper) {
        r.extreme = std::max(r.extreme, val);
        if (val > lambda + slack) ++r.violations;
      } else {
        r.extreme = std::min(r.extreme, val);
        if (val < lambda - slack) ++r.violations;
      }
    }
  }
  return r;
}

}  // namespace

BarrierGridReport check_barrier_inequalities(const BarrierPair& bp, double h,
                                             double slack) {
  BarrierGridReport rep;
  rep.h = h;
  rep.slack = slack;
  const double outer_depth = -bp.outer_curve(0.0);
  const int ncz = static_cast<int>(std::ceil(1.05 * outer_depth / h));
  const int ncy = static_cast<int>(std::lround(2.0 / h));
  const int ny = ncy + 1, nz = ncz + 1;
  rep.depth = ncz * h;

  std::vector<double> usub(static_cast<std::size_t>(ny) * nz, 0.0);
  std::vector<double> usup(usub.size(), 0.0);
  for (int i = 0; i < ny; ++i) {
    const double y = -1.0 + i * h;
    for (int j = 0; j < nz; ++j) {
      const double z = -(nz - 1 - j) * h;
      const std::size_t n = static_cast<std::size_t>(j) * ny + i;
      usub[n] = bp.subsolution(y, z);
      usup[n] = bp.supersolution(y, z);
    }
  }
  const CellData sub = sub_cells(bp, ncy, ncz, h);
  const CellData sup = super_cells(bp, ncy, ncz, h);

  const SideResult s0 =
      run_side(usub, sub, ny, nz, h, bp.lambda(), slack, /*want_upper=*/true);
  rep.sub_checked = s0.checked;
  rep.sub_violations = s0.violations;
  rep.sub_skipped = s0.skipped;
  rep.sub_max = s0.extreme;
  const SideResult s1 =
      run_side(usup, sup, ny, nz, h, bp.lambda(), slack, /*want_upper=*/false);
  rep.super_checked = s1.checked;
  rep.super_violations = s1.violations;
  rep.super_skipped = s1.skipped;
  rep.super_min = s1.extreme;
  return rep;
}

ContourBandReport check_contour_band(const std::vector<std::array<double, 2>>& points,
                                     const BarrierPair& bp, double hy, double hz) {
  ContourBandReport rep;
  rep.shallowest_z = -std::numeric_limits<double>::infinity();
  const double wall_depth = bp.load_params().wall_depth;
  for (const auto& p : points) {
    const double y = p[0], z = p[1];
    if (std::abs(y) > 1.0 - 2.0 * hy || z > -2.0 * hz) continue;
    ++rep.checked;
    const double above = z - (bp.inner_curve(y) + 2.0 * hz);
    const double below = (bp.outer_curve(y) - 2.0 * hz) - z;
    if (above > 0.0 || below > 0.0) ++rep.outside_band;
    rep.max_above_inner = std::max(rep.max_above_inner, above);
    rep.max_below_outer = std::max(rep.max_below_outer, below);
    rep.shallowest_z = std::max(rep.shallowest_z, z);
  }
  rep.depth_ok = rep.checked > 0 && rep.shallowest_z <= wall_depth + 2.0 * hz;
  return rep;
}

}  // namespace yieldflow
