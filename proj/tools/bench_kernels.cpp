// Micro-benchmark of the grid kernels: OpenMP-parallel versus the serial
// reference, with a consistency check between the two on random data.
#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "yieldflow/grid.hpp"
#include "yieldflow/kernels.hpp"

using namespace yieldflow;
using clk = std::chrono::steady_clock;

namespace {

double seconds_since(clk::time_point t0) {
  return std::chrono::duration<double>(clk::now() - t0).count();
}

struct Bench {
  GridField g;
  std::vector<double> gy, gz, w, fy, fz, out;

  explicit Bench(int ny, int nz) : g(ny, nz, 4.0) {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int j = 0; j < nz; ++j)
      for (int i = 0; i < ny; ++i)
        g.u[g.index(i, j)] = g.dirichlet(i, j) ? 0.0 : dist(rng);
    const std::size_t nc = static_cast<std::size_t>(g.cells_y()) * g.cells_z();
    gy.resize(nc);
    gz.resize(nc);
    w.resize(nc);
    fy.resize(nc);
    fz.resize(nc);
    out.resize(g.u.size());
  }

  double run(kernels::Backend be, int reps) {
    const auto t0 = clk::now();
    double sink = 0.0;
    for (int r = 0; r < reps; ++r) {
      kernels::cell_gradients(g, g.u.data(), gy.data(), gz.data(), be);
      kernels::cell_weights(g, gy.data(), gz.data(), 1e-3, w.data(), be);
      kernels::apply_weighted(g, w.data(), g.u.data(), fy.data(), fz.data(),
                              out.data(), be);
      sink += kernels::dot(g, out.data(), g.u.data(), be);
    }
    std::printf("  checksum %.12e\n", sink / reps);
    return seconds_since(t0) / reps;
  }
};

}  // namespace

int main(int argc, char** argv) {
  kernels::apply_thread_cap();
  int ny = 257, nz = 1025, reps = 20;
  if (argc > 1) ny = std::stoi(argv[1]);
  if (argc > 2) nz = std::stoi(argv[2]);
  if (argc > 3) reps = std::stoi(argv[3]);

  std::printf("grid %dx%d, %d reps, %d thread(s)\n", ny, nz, reps,
              kernels::thread_count());
  Bench b(ny, nz);

  std::printf("serial:\n");
  const double ts = b.run(kernels::Backend::serial, reps);
  std::vector<double> ref = b.out;

  std::printf("parallel:\n");
  const double tp = b.run(kernels::Backend::parallel, reps);

  double max_diff = 0.0;
  for (std::size_t k = 0; k < ref.size(); ++k)
    max_diff = std::max(max_diff, std::abs(ref[k] - b.out[k]));

  std::printf("serial   %.3f ms/iter\n", 1e3 * ts);
  std::printf("parallel %.3f ms/iter  (speedup %.2fx)\n", 1e3 * tp, ts / tp);
  std::printf("max elementwise difference %.3e\n", max_diff);
  return max_diff == 0.0 ? 0 : 1;
}
