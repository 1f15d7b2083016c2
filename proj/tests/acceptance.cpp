// Acceptance gate for the deliverable.  Six criteria, each printing exactly
// one PASS/FAIL verdict line (indented lines are supporting measurements).
// Every tolerance and threshold is pinned in this file on purpose; they are
// the contract, not knobs.  The process exits with the number of failed
// criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <deque>
#include <random>
#include <string>
#include <vector>

#include "yieldflow/barriers.hpp"
#include "yieldflow/cone.hpp"
#include "yieldflow/kernels.hpp"
#include "yieldflow/oned.hpp"
#include "yieldflow/profiles.hpp"
#include "yieldflow/solver.hpp"
#include "yieldflow/verify.hpp"

using namespace yieldflow;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int g_failures = 0;

void verdict(int idx, const char* name, bool pass, const std::string& detail) {
  std::printf("criterion %d: %-38s %s  (%s)\n", idx, name, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// ---------------------------------------------------------------------------
// criterion 1: the optimized auxiliary load and minimal support gap match the
// tabulated reference values to 1e-3, in under a second.
void criterion_table() {
  const auto t0 = Clock::now();
  struct Row {
    double lambda, lambda1, pi;
  };
  // pinned five-decimal reference values
  const Row want[] = {{1.2, 1.59451, 3.20584},
                      {1.4, 1.84198, 3.66274},
                      {1.6, 2.09337, 4.16455},
                      {1.8, 2.34819, 4.69225}};
  double dl = 0.0, dp = 0.0;
  for (const Row& r : want) {
    const Lambda1Result got = optimize_lambda1(r.lambda);
    dl = std::max(dl, std::abs(got.lambda1 - r.lambda1));
    dp = std::max(dp, std::abs(got.pi - r.pi));
  }
  const double dt = seconds_since(t0);
  verdict(1, "auxiliary-load table", dl <= 1e-3 && dp <= 1e-3 && dt < 1.0,
          fmt("max|d lambda1*| %.2e, max|d gap| %.2e, %.3f s < 1 s", dl, dp, dt));
}

// ---------------------------------------------------------------------------
// criterion 2: an independent projected-gradient minimizer (Sobolev metric,
// Barzilai-Borwein steps) of the discretized channel energy reproduces the
// closed-form profile on 1024 nodes
// for 20 random coefficient pairs: max-norm 1e-3 on the profile, and the
// gradient pairing at the minimizer (the full quadratic term plus the
// weighted variation, which the Euler-Lagrange equation ties to the volume)
// matches m * multiplier to 1e-3 relative, all in under ten seconds.

struct SpgResult {
  std::vector<double> w;
  double pairing = 0.0;  // discrete gradient pairing sum h (d^2 + A |d|)
};

// Projected gradient descent in the discrete H1 metric: the metric operator
// M = (1/h) tridiag(-1, 2, -1) on interior nodes is exactly the Hessian of
// the quadratic part of the energy, so preconditioning by it (one tridiagonal
// solve per step) removes the O(n^2) mesh stiffness of the plain Euclidean
// iteration.  The weighted-variation term is smoothed by a decreasing delta
// so the whole functional stays differentiable; Barzilai-Borwein steps with a
// nonmonotone line search handle the residual kink stiffness.  No closed-form
// information about the minimizer enters anywhere.
SpgResult spg_minimize_channel(double A, double m, int n) {
  const double h = 2.0 / (n - 1);
  const int k = n - 2;  // interior node count

  // Thomas elimination coefficients for T = tridiag(-1, 2, -1).
  std::vector<double> cprime(k);
  cprime[0] = -0.5;
  for (int i = 1; i < k; ++i) cprime[i] = -1.0 / (2.0 + cprime[i - 1]);
  // Solve (1/h) T x = r on interior nodes; r and x carry zero end values.
  auto minv = [&](const std::vector<double>& r) {
    std::vector<double> d(k), x(n, 0.0);
    d[0] = h * r[1] / 2.0;
    for (int i = 1; i < k; ++i) d[i] = (h * r[i + 1] + d[i - 1]) / (2.0 + cprime[i - 1]);
    x[k] = d[k - 1];
    for (int i = k - 1; i >= 1; --i) x[i] = d[i - 1] - cprime[i - 1] * x[i + 1];
    return x;
  };

  // M-orthogonal projection onto the volume hyperplane a . v = m, a = h 1.
  std::vector<double> a(n, h);
  a[0] = a[n - 1] = 0.0;
  const std::vector<double> pa = minv(a);
  double apa = 0.0;
  for (int i = 1; i < n - 1; ++i) apa += a[i] * pa[i];
  auto project = [&](std::vector<double>& v) {
    double av = 0.0;
    for (int i = 1; i < n - 1; ++i) av += h * v[i];
    const double s = (av - m) / apa;
    for (int i = 1; i < n - 1; ++i) v[i] -= s * pa[i];
  };

  auto value = [&](const std::vector<double>& v, double delta) {
    double F = 0.0;
    for (int c = 0; c < n - 1; ++c) {
      const double d = (v[c + 1] - v[c]) / h;
      F += h * (0.5 * d * d + A * std::sqrt(delta * delta + d * d));
    }
    return F;
  };
  auto gradient = [&](const std::vector<double>& v, double delta,
                      std::vector<double>& out) {
    // out_i = t_{i-1} - t_i with t_c = d_c (1 + A / sqrt(delta^2 + d_c^2))
    double tprev = 0.0;
    for (int c = 0; c < n - 1; ++c) {
      const double d = (v[c + 1] - v[c]) / h;
      const double t = d * (1.0 + A / std::sqrt(delta * delta + d * d));
      if (c > 0) out[c] = tprev - t;
      tprev = t;
    }
    out[0] = out[n - 1] = 0.0;
  };

  // start from a volume-matched parabola; no closed-form information used
  std::vector<double> w(n, 0.0), g(n, 0.0), gnew(n, 0.0), trial(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double y = -1.0 + i * h;
    w[i] = 0.75 * m * (1.0 - y * y);
  }
  w[0] = w[n - 1] = 0.0;
  project(w);

  const double deltas[] = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  for (const double delta : deltas) {
    gradient(w, delta, g);
    std::vector<double> G = minv(g);  // metric gradient
    double fw = value(w, delta);
    std::deque<double> recent = {fw};  // nonmonotone reference values
    double alpha = 1.0;                // unit metric step is the natural scale
    for (int it = 0; it < 2000; ++it) {
      // projected metric-gradient displacement and stationarity measure
      trial = w;
      for (int i = 1; i < n - 1; ++i) trial[i] -= G[i];
      project(trial);
      double stat = 0.0;
      for (int i = 1; i < n - 1; ++i) stat = std::max(stat, std::abs(trial[i] - w[i]));
      if (stat <= 1e-10 * (1.0 + m)) break;

      trial = w;
      for (int i = 1; i < n - 1; ++i) trial[i] -= alpha * G[i];
      project(trial);
      double gd = 0.0;  // directional derivative: Euclidean gradient pairing
      for (int i = 1; i < n - 1; ++i) gd += g[i] * (trial[i] - w[i]);

      // nonmonotone backtracking on the smoothed energy
      const double fref = *std::max_element(recent.begin(), recent.end());
      double tau = 1.0;
      std::vector<double> cand = trial;
      double fc = value(cand, delta);
      while (fc > fref + 1e-4 * tau * gd && tau > 1e-12) {
        tau *= 0.5;
        for (int i = 1; i < n - 1; ++i) cand[i] = w[i] + tau * (trial[i] - w[i]);
        fc = value(cand, delta);
      }

      gradient(cand, delta, gnew);
      // Barzilai-Borwein step in the metric: <s, s>_M / <s, grad change>
      double sms = 0.0, sy = 0.0;
      for (int c = 0; c < n - 1; ++c) {
        const double ds = (cand[c + 1] - w[c + 1]) - (cand[c] - w[c]);
        sms += ds * ds / h;
      }
      for (int i = 1; i < n - 1; ++i) sy += (cand[i] - w[i]) * (gnew[i] - g[i]);
      alpha = sy > 0.0 ? std::clamp(sms / sy, 1e-10, 1e10) : 1e2;
      w.swap(cand);
      g.swap(gnew);
      G = minv(g);
      fw = fc;
      recent.push_back(fw);
      if (recent.size() > 10) recent.pop_front();
    }
  }

  SpgResult r;
  for (int c = 0; c < n - 1; ++c) {
    const double d = (w[c + 1] - w[c]) / h;
    r.pairing += h * (d * d + A * std::abs(d));
  }
  r.w = std::move(w);
  return r;
}

void criterion_oned_oracle() {
  const auto t0 = Clock::now();
  const int n = 1024;
  std::mt19937 rng(20260825);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double worst_w = 0.0, worst_e = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double A = 3.0 * (1.0 - uni(rng));  // in (0, 3]
    const double m = 4.0 * (1.0 - uni(rng));  // in (0, 4]
    const SpgResult got = spg_minimize_channel(A, m, n);
    const OneDSolution s = solve_oned(A, m);
    double dw = 0.0;
    for (int i = 0; i < n; ++i) {
      const double y = -1.0 + 2.0 * i / (n - 1);
      dw = std::max(dw, std::abs(got.w[i] - profile_w(s, std::clamp(y, -1.0, 1.0))));
    }
    worst_w = std::max(worst_w, dw);
    worst_e = std::max(worst_e,
                       std::abs(got.pairing - minimal_energy(s)) / minimal_energy(s));
  }
  const double dt = seconds_since(t0);
  verdict(2, "independent 1-d minimizer",
          worst_w <= 1e-3 && worst_e <= 1e-3 && dt < 10.0,
          fmt("max profile gap %.2e, max pairing rel err %.2e, %.2f s < 10 s",
              worst_w, worst_e, dt));
}

// ---------------------------------------------------------------------------
// criterion 3: closed-form consistency of the yield-curve machinery: the
// curvature-equation residual, the transport-divergence residual, and the
// chart gradient bound.
void criterion_closed_forms() {
  const double lams[] = {1.2, 1.5, 2.0, 5.0};
  double worst_ode = 0.0, worst_div = 0.0, worst_grad = 0.0;
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (const double lam : lams) {
    const ProfileParams p = make_profile_params(lam);
    for (int k = 0; k <= 396; ++k) {
      const double y = -0.99 + 1.98 * k / 396.0;
      worst_ode = std::max(worst_ode, std::abs(profile_ode_residual(p, y)));
    }
    const ConeChart chart(lam);
    const double C = chart.bounds().gradient_sq;
    for (int k = 0; k < 100; ++k) {
      const double t = -0.95 + 1.9 * uni(rng);
      const double L = 0.1 + 2.4 * uni(rng);
      const double y = L * t, z = L * profile_value(p, t);
      worst_div = std::max(worst_div, std::abs(chart.divergence_residual(y, z, 1e-4)));
      const auto gr = chart.scale_gradient(y, z);
      worst_grad = std::max(worst_grad, gr[0] * gr[0] + gr[1] * gr[1] - C);
    }
  }
  verdict(3, "closed-form residuals",
          worst_ode <= 1e-8 && worst_div <= 1e-5 && worst_grad <= 1e-9,
          fmt("curvature res %.2e, divergence res %.2e, gradient excess %.1e",
              worst_ode, worst_div, worst_grad));
}

// ---------------------------------------------------------------------------
// criteria 4 and 5 share the five reference solves on the 129 x 513 grid.

struct SolveCase {
  double lambda = 0.0;
  SolveResult result;
};

void criterion_solves(std::vector<SolveCase>& cases) {
  const double lams[] = {0.5, 0.9, 1.0, 1.2, 2.0};
  bool pass = true;
  for (const double lam : lams) {
    SolveSpec spec;  // defaults: 129 x 513, eps_min 1e-4, automatic depth
    spec.lambda = lam;
    SolveCase sc;
    sc.lambda = lam;
    sc.result = solve(spec);
    const SolveReport& rep = sc.result.report;
    // Rest below the critical load, decisively nonzero flow above it.  The
    // floor 5e-2 is part of the pinned contract; near the critical load the
    // flow switches on quadratically, and the 1.2 case converges to a max u
    // around 1.5e-2 (stable under grid refinement), so that sub-check is
    // expected to record an honest failure rather than a tuned threshold.
    const bool amp_ok = lam <= 1.0 ? rep.max_u <= 5e-3 : rep.max_u >= 5e-2;
    const bool time_ok = rep.runtime_s < 120.0;
    std::printf("  load %.1f: max u %.4e (%s), %5.1f s (%s)\n", lam, rep.max_u,
                amp_ok ? "ok" : "out of range", rep.runtime_s,
                time_ok ? "ok" : "over budget");
    std::fflush(stdout);
    pass = pass && amp_ok && time_ok;
    cases.push_back(std::move(sc));
  }
  verdict(4, "reference solves: amplitude + budget", pass,
          "rest <= 5e-3 below critical, flow >= 5e-2 above, each < 120 s");
}

void criterion_sandwich(const std::vector<SolveCase>& cases) {
  bool pass = true;
  for (const SolveCase& sc : cases) {
    if (sc.lambda <= 1.0) continue;
    const GridField& g = sc.result.grid;
    const BarrierPair bp(sc.lambda);
    const double slack = sandwich_slack(g, 1e-4);
    const SandwichReport sw = verify_sandwich(g, bp, slack);
    const ContourBandReport band =
        check_contour_band(sc.result.report.contour, bp, g.hy(), g.hz());
    const bool ok = sw.sub_violations == 0 && sw.super_violations == 0 &&
                    band.outside_band <= 2 && band.depth_ok;
    std::printf(
        "  load %.1f: sandwich %ld/%ld violations (slack %.2e), band %ld/%ld "
        "outside, shallowest z %.3f (%s)\n",
        sc.lambda, sw.sub_violations, sw.super_violations, slack,
        band.outside_band, band.checked, band.shallowest_z,
        band.depth_ok ? "reaches wall depth" : "too shallow");
    std::fflush(stdout);
    pass = pass && ok;
  }
  verdict(5, "barrier sandwich + contour band", pass,
          "0 sandwich violations, <= 2 vertices off band, wall depth reached");
}

// ---------------------------------------------------------------------------
// criterion 6: the two barrier differential inequalities hold in weak form on
// a fine lattice, off the interface tubes, at 99.9% of the sampled points.
void criterion_barrier_grid() {
  const auto t0 = Clock::now();
  const BarrierPair bp(2.0);
  const BarrierGridReport r = check_barrier_inequalities(bp, 1.0 / 256.0, 1e-3);
  const double sub_pass =
      1.0 - static_cast<double>(r.sub_violations) / static_cast<double>(r.sub_checked);
  const double super_pass =
      1.0 -
      static_cast<double>(r.super_violations) / static_cast<double>(r.super_checked);
  const double dt = seconds_since(t0);
  verdict(6, "weak-form barrier inequalities",
          sub_pass >= 0.999 && super_pass >= 0.999,
          fmt("lower %.5f (%ld/%ld), upper %.5f (%ld/%ld), h=1/256, %.0f s",
              sub_pass, r.sub_violations, r.sub_checked, super_pass,
              r.super_violations, r.super_checked, dt));
}

}  // namespace

int main() {
  kernels::apply_thread_cap();
  std::printf("acceptance suite (%d thread(s))\n", kernels::thread_count());
  criterion_table();
  criterion_oned_oracle();
  criterion_closed_forms();
  std::vector<SolveCase> cases;
  criterion_solves(cases);
  criterion_sandwich(cases);
  criterion_barrier_grid();
  std::printf("acceptance: %d of 6 criteria passed\n", 6 - g_failures);
  return g_failures;
}
