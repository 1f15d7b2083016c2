#include "yieldflow/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <stdexcept>

#include "yieldflow/roots.hpp"

namespace yieldflow {

using kernels::Backend;

double auto_depth(double lambda) {
  if (lambda <= 1.0) return 4.0;
  const Lambda1Result opt = optimize_lambda1(lambda);
  const SupersolutionParams s = make_supersolution_params(lambda, opt.lambda1);
  const ProfileParams p1 = make_profile_params(opt.lambda1);
  return 1.25 * s.b * (-p1.scale) / (opt.lambda1 - 1.0);
}

double discrete_energy(const GridField& g, double eps, double lambda, Backend be) {
  return kernels::energy(g, g.u.data(), eps, lambda, be);
}

namespace {

struct Workspace {
  std::vector<double> gy, gz, w, fy, fz;   // cell arrays
  std::vector<double> b, r, z, p, q, diag; // node arrays
  explicit Workspace(const GridField& g) {
    const std::size_t nc = static_cast<std::size_t>(g.cells_y()) * g.cells_z();
    const std::size_t nn = static_cast<std::size_t>(g.ny) * g.nz;
    gy.assign(nc, 0.0); gz.assign(nc, 0.0); w.assign(nc, 0.0);
    fy.assign(nc, 0.0); fz.assign(nc, 0.0);
    b.assign(nn, 0.0); r.assign(nn, 0.0); z.assign(nn, 0.0);
    p.assign(nn, 0.0); q.assign(nn, 0.0); diag.assign(nn, 0.0);
  }
};

// Nonlinear residual b - A_{w(u)} u into ws.r (and the matching diagonal into
// ws.diag).  Returns the max over free nodes of |r_n| / (hy*hz*max(1, W_n)),
// where W_n is the mean weight of the adjacent cells: r_n/(hy*hz) tends to
// the pointwise equation residual under refinement (so the measure does not
// loosen with the grid), and the weight normalization keeps rigid-zone rows
// (weights of order |z|/eps) from drowning out the flowing region.
double nonlinear_residual(const GridField& g, Workspace& ws, double eps, Backend be) {
  kernels::cell_gradients(g, g.u.data(), ws.gy.data(), ws.gz.data(), be);
  kernels::cell_weights(g, ws.gy.data(), ws.gz.data(), eps, ws.w.data(), be);
  kernels::apply_weighted(g, ws.w.data(), g.u.data(), ws.fy.data(), ws.fz.data(),
                          ws.r.data(), be);
  kernels::weighted_diagonal(g, ws.w.data(), ws.diag.data(), be);
  const int nn = g.ny * g.nz;
  for (int n = 0; n < nn; ++n) ws.r[n] = ws.b[n] - ws.r[n];
  // diag_n = (hy/hz + hz/hy)/4 * sum of adjacent weights, so dividing by the
  // aspect sum turns it into W_n (up to the cell count, irrelevant under max).
  const double aspect = g.hy() / g.hz() + g.hz() / g.hy();
  const double area = g.hy() * g.hz();
  double mx = 0.0;
  if (be == Backend::serial) {
    for (int n = 0; n < nn; ++n)
      mx = std::max(mx, std::abs(ws.r[n]) / (area * std::max(1.0, ws.diag[n] / aspect)));
  } else {
#pragma omp parallel for reduction(max : mx) schedule(static)
    for (int n = 0; n < nn; ++n)
      mx = std::max(mx, std::abs(ws.r[n]) / (area * std::max(1.0, ws.diag[n] / aspect)));
  }
  return mx;
}

// Jacobi-preconditioned CG for A_w x = b, warm-started from x; expects the
// initial residual in ws.r and the matching diagonal in ws.diag (both left
// there by nonlinear_residual).  Stops at an absolute residual target.
// Returns iterations taken.
int pcg(const GridField& g, Workspace& ws, std::vector<double>& x, double target,
        int max_iter, Backend be) {
  const int nn = g.ny * g.nz;

  auto precondition = [&](const std::vector<double>& src, std::vector<double>& dst) {
    if (be == Backend::serial) {
      for (int n = 0; n < nn; ++n) dst[n] = src[n] / ws.diag[n];
      return;
    }
#pragma omp parallel for schedule(static)
    for (int n = 0; n < nn; ++n) dst[n] = src[n] / ws.diag[n];
  };

  double rnorm = std::sqrt(kernels::dot(g, ws.r.data(), ws.r.data(), be));
  if (rnorm <= target) return 0;
  precondition(ws.r, ws.z);
  ws.p = ws.z;
  double rz = kernels::dot(g, ws.r.data(), ws.z.data(), be);
  for (int it = 1; it <= max_iter; ++it) {
    kernels::apply_weighted(g, ws.w.data(), ws.p.data(), ws.fy.data(), ws.fz.data(),
                            ws.q.data(), be);
    const double pq = kernels::dot(g, ws.p.data(), ws.q.data(), be);
    if (!(pq > 0.0)) throw convergence_error("pcg: lost positive definiteness");
    const double alpha = rz / pq;
    kernels::axpy(g, alpha, ws.p.data(), x.data(), be);
    kernels::axpy(g, -alpha, ws.q.data(), ws.r.data(), be);
    rnorm = std::sqrt(kernels::dot(g, ws.r.data(), ws.r.data(), be));
    if (rnorm <= target) return it;
    precondition(ws.r, ws.z);
    const double rz_new = kernels::dot(g, ws.r.data(), ws.z.data(), be);
    kernels::xpby(g, ws.z.data(), rz_new / rz, ws.p.data(), be);
    rz = rz_new;
  }
  char msg[160];
  std::snprintf(msg, sizeof msg,
                "pcg: no convergence in %d iterations (residual %.3e, target %.3e)",
                max_iter, rnorm, target);
  throw convergence_error(msg);
}

void validate(const SolveSpec& s) {
  if (!(s.lambda >= 0.0)) throw std::domain_error("solve: lambda must be nonnegative");
  if (s.ny < 3 || s.nz < 3) throw std::domain_error("solve: grid must be at least 3x3");
  if (!(s.eps_min > 0.0) || !(s.eps0 >= s.eps_min))
    throw std::domain_error("solve: need 0 < eps_min <= eps0");
  if (!(s.eps_ratio > 0.0 && s.eps_ratio < 1.0))
    throw std::domain_error("solve: eps_ratio must lie in (0, 1)");
  if (!(s.tol > 0.0)) throw std::domain_error("solve: tol must be positive");
}

// Continuation stages eps0, eps0*ratio, ..., ending exactly at eps_min.
std::vector<double> epsilon_schedule(const SolveSpec& s) {
  std::vector<double> eps;
  for (double e = s.eps0; e > s.eps_min * (1.0 + 1e-12); e *= s.eps_ratio)
    eps.push_back(e);
  eps.push_back(s.eps_min);
  return eps;
}

// Lagged-diffusivity continuation over `stages` on an initialized field,
// recording per-stage diagnostics into rep.
void run_stages(const SolveSpec& spec, const std::vector<double>& stages,
                GridField& g, SolveReport& rep) {
  const Backend be = spec.backend;
  Workspace ws(g);
  kernels::load_vector(g, spec.lambda, ws.b.data(), be);

  const bool trace = std::getenv("YIELDFLOW_TRACE") != nullptr;
  const double res_target = spec.tol * std::max(1.0, spec.lambda);
  const double bnorm =
      std::max(std::sqrt(kernels::dot(g, ws.b.data(), ws.b.data(), be)), 1e-300);
  for (const double eps : stages) {
    int stage_iters = 0;
    // Inexact inner solves: each CG run only needs to beat the current outer
    // residual by the factor eta — the stage exit condition below measures
    // the true nonlinear residual, so accuracy of the final iterate is not
    // affected.  If a step fails to shrink the outer residual, eta tightens
    // until the floor cg_tol*|b| (an essentially exact solve) is reached.
    double eta = spec.inexact;
    double prev_res = std::numeric_limits<double>::infinity();
    for (;; ++stage_iters) {
      const double res = nonlinear_residual(g, ws, eps, be);
      const double en = kernels::energy(g, g.u.data(), eps, spec.lambda, be);
      rep.energy_history.push_back(en);
      rep.el_residual = res;
      if (trace)
        std::fprintf(stderr, "trace %dx%d eps=%.6e it=%3d res=%.6e energy=%.12e\n",
                     g.ny, g.nz, eps, stage_iters, res, en);
      if (res <= res_target) break;
      if (stage_iters >= spec.max_outer) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "solve: lagged iteration stalled at eps=%.3e "
                      "(residual %.3e, target %.3e)", eps, res, res_target);
        throw convergence_error(msg);
      }
      // The fixed point contracts at roughly 0.9 per step late in a stage, so
      // an inner solve a factor of a few below the current residual cannot
      // perturb the path; tighten only on a genuine stall, recover when the
      // contraction is healthy.
      if (res > 0.98 * prev_res) eta = std::max(0.25 * eta, 1e-12);
      else if (res < 0.7 * prev_res) eta = std::min(2.0 * eta, spec.inexact);
      prev_res = res;
      const double rnorm = std::sqrt(kernels::dot(g, ws.r.data(), ws.r.data(), be));
      const double target = std::max(spec.cg_tol * bnorm, eta * rnorm);
      const int cg_iters = pcg(g, ws, g.u, target, spec.cg_max, be);
      if (trace) std::fprintf(stderr, "trace   cg=%d eta=%.2e\n", cg_iters, eta);
    }
    rep.iters_per_eps.push_back(stage_iters);
    rep.iters += stage_iters;
    rep.max_u_per_eps.push_back(kernels::max_abs_free(g, g.u.data(), be));
  }
}

// Bilinear prolongation from a factor-2 coarse field (node-nested grids).
void prolong(const GridField& coarse, GridField& fine) {
  for (int j = 0; j < fine.nz; ++j)
    for (int i = 0; i < fine.ny; ++i) {
      if (fine.dirichlet(i, j)) continue;
      const int ic = i / 2, jc = j / 2;
      const double* cu = coarse.u.data();
      const int n00 = coarse.index(ic, jc);
      double v;
      if (i % 2 == 0 && j % 2 == 0) v = cu[n00];
      else if (j % 2 == 0) v = 0.5 * (cu[n00] + cu[coarse.index(ic + 1, jc)]);
      else if (i % 2 == 0) v = 0.5 * (cu[n00] + cu[coarse.index(ic, jc + 1)]);
      else
        v = 0.25 * (cu[n00] + cu[coarse.index(ic + 1, jc)] +
                    cu[coarse.index(ic, jc + 1)] + cu[coarse.index(ic + 1, jc + 1)]);
      fine.u[fine.index(i, j)] = v;
    }
}

// Depth of the nested-iteration hierarchy: halve while the node counts stay
// nested (odd) and the coarse grid remains large enough to be meaningful.
int coarsen_levels(int ny, int nz) {
  int levels = 0;
  while (ny >= 65 && nz >= 65 && (ny - 1) % 2 == 0 && (nz - 1) % 2 == 0) {
    ny = (ny - 1) / 2 + 1;
    nz = (nz - 1) / 2 + 1;
    ++levels;
  }
  return levels;
}

}  // namespace

SolveResult solve(const SolveSpec& spec) {
  validate(spec);
  const auto t0 = std::chrono::steady_clock::now();

  SolveResult out;
  double depth = spec.depth;
  std::optional<BarrierPair> pair;
  if (spec.lambda > 1.0) {
    const Lambda1Result opt = optimize_lambda1(spec.lambda);
    pair.emplace(spec.lambda, opt.lambda1);
    if (depth <= 0.0) {
      const ProfileParams p1 = pair->chart1().params();
      depth = 1.25 * pair->super().b * (-p1.scale) / (opt.lambda1 - 1.0);
    }
  } else if (depth <= 0.0) {
    depth = auto_depth(spec.lambda);
  }

  const std::vector<double> schedule = epsilon_schedule(spec);

  // Nested iteration: run the full continuation only on the coarsest grid of
  // a factor-2 hierarchy, prolong, and polish each finer grid with the final
  // stages of the schedule.  The energy is convex, so starting a fine grid
  // directly at small epsilon is safe once the iterate is already close.
  const int levels = spec.nested ? coarsen_levels(spec.ny, spec.nz) : 0;
  std::vector<double> tail(schedule.end() - std::min<std::size_t>(2, schedule.size()),
                           schedule.end());

  SolveReport& rep = out.report;
  rep.lambda = spec.lambda;

  GridField coarse;
  for (int lev = levels; lev >= 0; --lev) {
    const int step = 1 << lev;
    GridField g((spec.ny - 1) / step + 1, (spec.nz - 1) / step + 1, depth);
    if (lev == levels) {
      // Coarsest grid: subsolution start for supercritical loads, zero else.
      if (pair)
        for (int j = 0; j < g.nz; ++j)
          for (int i = 0; i < g.ny; ++i)
            if (!g.dirichlet(i, j))
              g.u[g.index(i, j)] = pair->subsolution(g.y(i), g.z(j));
    } else {
      prolong(coarse, g);
    }
    const std::vector<double>& stages = lev == levels ? schedule : tail;
    if (lev > 0) {
      SolveReport warm;
      warm.lambda = spec.lambda;
      run_stages(spec, stages, g, warm);
      rep.warmup_iters += warm.iters;
      coarse = std::move(g);
    } else {
      rep.epsilons = stages;
      run_stages(spec, stages, g, rep);
      out.grid = std::move(g);
    }
  }
  GridField& g = out.grid;

  rep.max_u = rep.max_u_per_eps.back();
  rep.energy = rep.energy_history.back();
  // Relative threshold: the regularized solution is strictly positive on the
  // whole interior, so the numeric flowing region is a small level set of the
  // field, scaled to its amplitude.
  rep.support_threshold = spec.threshold_factor * rep.max_u;
  SupportContour sc = extract_support(g, rep.support_threshold);
  rep.support_area = sc.area;
  rep.contour = std::move(sc.points);
  rep.contour_offsets = std::move(sc.offsets);

  rep.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

double el_residual(const GridField& g, double eps, double lambda, Backend be) {
  Workspace ws(g);
  kernels::load_vector(g, lambda, ws.b.data(), be);
  return nonlinear_residual(g, ws, eps, be);
}

NodalFlux recover_flux(const GridField& g, double eps) {
  const int ny = g.ny, nz = g.nz, ncy = g.cells_y(), ncz = g.cells_z();
  const std::size_t nc = static_cast<std::size_t>(ncy) * ncz;
  std::vector<double> gy(nc), gz(nc);
  kernels::cell_gradients(g, g.u.data(), gy.data(), gz.data(), Backend::serial);
  NodalFlux f;
  f.q1.assign(static_cast<std::size_t>(ny) * nz, 0.0);
  f.q2.assign(static_cast<std::size_t>(ny) * nz, 0.0);
  for (int j = 0; j < nz; ++j)
    for (int i = 0; i < ny; ++i) {
      double s1 = 0.0, s2 = 0.0;
      int cnt = 0;
      for (int dj = -1; dj <= 0; ++dj)
        for (int di = -1; di <= 0; ++di) {
          const int ic = i + di, jc = j + dj;
          if (ic < 0 || ic >= ncy || jc < 0 || jc >= ncz) continue;
          const int c = jc * ncy + ic;
          const double norm =
              std::sqrt(eps * eps + gy[c] * gy[c] + gz[c] * gz[c]);
          s1 += gy[c] / norm;
          s2 += gz[c] / norm;
          ++cnt;
        }
      f.q1[g.index(i, j)] = s1 / cnt;
      f.q2[g.index(i, j)] = s2 / cnt;
    }
  return f;
}

SupportContour extract_support(const GridField& g, double threshold) {
  SupportContour out;
  const int ncy = g.cells_y(), ncz = g.cells_z();
  const double hy = g.hy(), hz = g.hz();

  // Area by cell counting (cell mean above threshold).
  for (int jc = 0; jc < ncz; ++jc)
    for (int ic = 0; ic < ncy; ++ic) {
      const int n = jc * g.ny + ic;
      const double mean = 0.25 * (g.u[n] + g.u[n + 1] + g.u[n + g.ny] + g.u[n + g.ny + 1]);
      if (mean > threshold) out.area += hy * hz;
    }

  // Marching squares: collect one or two segments per cell.  Each endpoint
  // carries the id of the grid edge it lies on; adjacent cells agree on that
  // id exactly, so chaining never depends on coordinate round-off.  (The
  // coordinates themselves also agree bitwise, being computed from the same
  // nodal values, which keeps closed loops exactly closed.)
  struct Pt { std::array<double, 2> p; long long edge; };
  struct Seg { Pt a, b; };
  std::vector<Seg> segs;
  auto lerp = [&](double ya, double za, double va, double yb, double zb, double vb)
      -> std::array<double, 2> {
    const double t = (threshold - va) / (vb - va);
    return {ya + t * (yb - ya), za + t * (zb - za)};
  };
  for (int jc = 0; jc < ncz; ++jc)
    for (int ic = 0; ic < ncy; ++ic) {
      const int n = jc * g.ny + ic;
      const double y0 = g.y(ic), y1 = g.y(ic + 1), z0 = g.z(jc), z1 = g.z(jc + 1);
      const double vsw = g.u[n], vse = g.u[n + 1];
      const double vnw = g.u[n + g.ny], vne = g.u[n + g.ny + 1];
      int code = 0;
      if (vsw > threshold) code |= 1;
      if (vse > threshold) code |= 2;
      if (vne > threshold) code |= 4;
      if (vnw > threshold) code |= 8;
      if (code == 0 || code == 15) continue;
      // horizontal edges even ids, vertical edges odd: globally unique
      const long long row = static_cast<long long>(jc);
      const auto s = [&] {  // south edge
        return Pt{lerp(y0, z0, vsw, y1, z0, vse), (row * ncy + ic) * 2};
      };
      const auto e = [&] {  // east edge
        return Pt{lerp(y1, z0, vse, y1, z1, vne), (row * (ncy + 1) + ic + 1) * 2 + 1};
      };
      const auto nn = [&] {  // north edge
        return Pt{lerp(y0, z1, vnw, y1, z1, vne), ((row + 1) * ncy + ic) * 2};
      };
      const auto ww = [&] {  // west edge
        return Pt{lerp(y0, z0, vsw, y0, z1, vnw), (row * (ncy + 1) + ic) * 2 + 1};
      };
      switch (code) {
        case 1:  segs.push_back({ww(), s()}); break;
        case 2:  segs.push_back({s(), e()}); break;
        case 3:  segs.push_back({ww(), e()}); break;
        case 4:  segs.push_back({e(), nn()}); break;
        case 6:  segs.push_back({s(), nn()}); break;
        case 7:  segs.push_back({ww(), nn()}); break;
        case 8:  segs.push_back({nn(), ww()}); break;
        case 9:  segs.push_back({nn(), s()}); break;
        case 11: segs.push_back({nn(), e()}); break;
        case 12: segs.push_back({e(), ww()}); break;
        case 13: segs.push_back({e(), s()}); break;
        case 14: segs.push_back({s(), ww()}); break;
        case 5: {  // saddle: decide by the cell mean
          const double mean = 0.25 * (vsw + vse + vne + vnw);
          if (mean > threshold) {
            segs.push_back({ww(), nn()});
            segs.push_back({e(), s()});
          } else {
            segs.push_back({ww(), s()});
            segs.push_back({e(), nn()});
          }
          break;
        }
        case 10: {
          const double mean = 0.25 * (vsw + vse + vne + vnw);
          if (mean > threshold) {
            segs.push_back({s(), e()});
            segs.push_back({nn(), ww()});
          } else {
            segs.push_back({s(), ww()});
            segs.push_back({nn(), e()});
          }
          break;
        }
        default: break;
      }
    }

  // Chain segments into polylines by matching edge ids.
  struct End { int seg; int end; };  // end: 0 = a, 1 = b
  std::multimap<long long, End> ends;
  auto key_of = [&](int s, int e) { return e ? segs[s].b.edge : segs[s].a.edge; };
  for (int si = 0; si < static_cast<int>(segs.size()); ++si) {
    ends.emplace(key_of(si, 0), End{si, 0});
    ends.emplace(key_of(si, 1), End{si, 1});
  }
  std::vector<char> used(segs.size(), 0);
  auto find_next = [&](long long key, int exclude) -> End {
    auto [lo, hi] = ends.equal_range(key);
    for (auto it = lo; it != hi; ++it)
      if (it->second.seg != exclude && !used[it->second.seg]) return it->second;
    return End{-1, -1};
  };
  for (int s0 = 0; s0 < static_cast<int>(segs.size()); ++s0) {
    if (used[s0]) continue;
    // Walk from the a-end of s0 to a free chain end without marking anything;
    // a closed loop brings the walk back to s0, which also terminates it.
    int cur = s0, cur_end = 0, guard = 0;
    while (guard++ <= static_cast<int>(segs.size())) {
      const End nb = find_next(key_of(cur, cur_end), cur);
      if (nb.seg < 0 || nb.seg == s0) break;
      cur = nb.seg;
      cur_end = 1 - nb.end;
    }
    // Emit the chain from that end, marking segments as they are consumed.
    out.offsets.push_back(static_cast<int>(out.points.size()));
    out.points.push_back(cur_end ? segs[cur].b.p : segs[cur].a.p);
    while (true) {
      used[cur] = 1;
      cur_end = 1 - cur_end;
      out.points.push_back(cur_end ? segs[cur].b.p : segs[cur].a.p);
      const End nb = find_next(key_of(cur, cur_end), cur);
      if (nb.seg < 0) break;
      cur = nb.seg;
      cur_end = nb.end;
    }
  }
  out.offsets.push_back(static_cast<int>(out.points.size()));
  return out;
}

SandwichReport verify_sandwich(const GridField& g, const BarrierPair& bp, double slack) {
  SandwichReport rep;
  rep.slack = slack;
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.ny; ++i) {
      const double y = g.y(i), z = g.z(j);
      const double u = g.u[g.index(i, j)];
      const double lo = bp.subsolution(y, z);
      const double hi = bp.supersolution(y, z);
      ++rep.checked;
      rep.max_sub_gap = std::max(rep.max_sub_gap, lo - u);
      rep.max_super_gap = std::max(rep.max_super_gap, u - hi);
      if (u < lo - slack) ++rep.sub_violations;
      if (u > hi + slack) ++rep.super_violations;
    }
  return rep;
}

double sandwich_slack(const GridField& g, double eps_min) {
  return kSandwichSlackFactor * (std::max(g.hy(), g.hz()) + eps_min);
}

}  // namespace yieldflow
