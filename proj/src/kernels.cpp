#include "yieldflow/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace yieldflow::kernels {

void apply_thread_cap() {
#ifdef _OPENMP
  if (const char* env = std::getenv("YIELDFLOW_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void cell_gradients(const GridField& g, const double* u, double* gy, double* gz,
                    Backend be) {
  const int ncy = g.cells_y(), ncz = g.cells_z(), ny = g.ny;
  const double ihy = 0.5 / g.hy(), ihz = 0.5 / g.hz();
  if (be == Backend::serial) {
    for (int jc = 0; jc < ncz; ++jc)
      for (int ic = 0; ic < ncy; ++ic) {
        const int n = jc * ny + ic, c = jc * ncy + ic;
        const double usw = u[n], use = u[n + 1], unw = u[n + ny], une = u[n + ny + 1];
        gy[c] = (use + une - usw - unw) * ihy;
        gz[c] = (unw + une - usw - use) * ihz;
      }
    return;
  }
#pragma omp parallel for schedule(static)
  for (int jc = 0; jc < ncz; ++jc)
    for (int ic = 0; ic < ncy; ++ic) {
      const int n = jc * ny + ic, c = jc * ncy + ic;
      const double usw = u[n], use = u[n + 1], unw = u[n + ny], une = u[n + ny + 1];
      gy[c] = (use + une - usw - unw) * ihy;
      gz[c] = (unw + une - usw - use) * ihz;
    }
}

void cell_weights(const GridField& g, const double* gy, const double* gz,
                  double eps, double* w, Backend be) {
  const int ncy = g.cells_y(), ncz = g.cells_z();
  const double hz = g.hz();
  if (be == Backend::serial) {
    for (int jc = 0; jc < ncz; ++jc) {
      const double zc = -g.depth + (jc + 0.5) * hz;  // cell-center z (< 0)
      for (int ic = 0; ic < ncy; ++ic) {
        const int c = jc * ncy + ic;
        w[c] = 1.0 - zc / std::sqrt(eps * eps + gy[c] * gy[c] + gz[c] * gz[c]);
      }
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (int jc = 0; jc < ncz; ++jc) {
    const double zc = -g.depth + (jc + 0.5) * hz;
    for (int ic = 0; ic < ncy; ++ic) {
      const int c = jc * ncy + ic;
      w[c] = 1.0 - zc / std::sqrt(eps * eps + gy[c] * gy[c] + gz[c] * gz[c]);
    }
  }
}

namespace {

// Pass 1: per-cell fluxes fy = hz*w*gy/2, fz = hy*w*gz/2 of the current x.
inline void cell_fluxes(const GridField& g, const double* w, const double* x,
                        double* fy, double* fz, Backend be) {
  const int ncy = g.cells_y(), ncz = g.cells_z(), ny = g.ny;
  const double ihy = 0.5 / g.hy(), ihz = 0.5 / g.hz();
  const double cy = 0.5 * g.hz(), cz = 0.5 * g.hy();
  auto row = [&](int jc) {
    for (int ic = 0; ic < ncy; ++ic) {
      const int n = jc * ny + ic, c = jc * ncy + ic;
      const double xsw = x[n], xse = x[n + 1], xnw = x[n + ny], xne = x[n + ny + 1];
      const double gy = (xse + xne - xsw - xnw) * ihy;
      const double gz = (xnw + xne - xsw - xse) * ihz;
      fy[c] = cy * w[c] * gy;
      fz[c] = cz * w[c] * gz;
    }
  };
  if (be == Backend::serial) {
    for (int jc = 0; jc < ncz; ++jc) row(jc);
    return;
  }
#pragma omp parallel for schedule(static)
  for (int jc = 0; jc < ncz; ++jc) row(jc);
}

}  // namespace

void apply_weighted(const GridField& g, const double* w, const double* x,
                    double* fy, double* fz, double* out, Backend be) {
  cell_fluxes(g, w, x, fy, fz, be);
  const int ny = g.ny, nz = g.nz, ncy = g.cells_y(), ncz = g.cells_z();
  // Pass 2: each free node gathers from its (up to) four adjacent cells with
  // the corner signs of the bilinear gradient.
  auto row = [&](int j) {
    for (int i = 0; i < ny; ++i) {
      const int n = j * ny + i;
      if (g.dirichlet(i, j)) {
        out[n] = 0.0;
        continue;
      }
      double acc = 0.0;
      if (i > 0 && j > 0) {  // node is NE corner of cell (i-1, j-1)
        const int c = (j - 1) * ncy + (i - 1);
        acc += fy[c] + fz[c];
      }
      if (i < ncy && j > 0) {  // NW corner of cell (i, j-1)
        const int c = (j - 1) * ncy + i;
        acc += -fy[c] + fz[c];
      }
      if (i > 0 && j < ncz) {  // SE corner of cell (i-1, j)
        const int c = j * ncy + (i - 1);
        acc += fy[c] - fz[c];
      }
      if (i < ncy && j < ncz) {  // SW corner of cell (i, j)
        const int c = j * ncy + i;
        acc += -fy[c] - fz[c];
      }
      out[n] = acc;
    }
  };
  if (be == Backend::serial) {
    for (int j = 0; j < nz; ++j) row(j);
    return;
  }
#pragma omp parallel for schedule(static)
  for (int j = 0; j < nz; ++j) row(j);
}

void weighted_diagonal(const GridField& g, const double* w, double* diag, Backend be) {
  const int ny = g.ny, nz = g.nz, ncy = g.cells_y(), ncz = g.cells_z();
  const double per_cell = 0.25 * (g.hz() / g.hy() + g.hy() / g.hz());
  auto row = [&](int j) {
    for (int i = 0; i < ny; ++i) {
      const int n = j * ny + i;
      if (g.dirichlet(i, j)) {
        diag[n] = 1.0;
        continue;
      }
      double acc = 0.0;
      if (i > 0 && j > 0) acc += w[(j - 1) * ncy + (i - 1)];
      if (i < ncy && j > 0) acc += w[(j - 1) * ncy + i];
      if (i > 0 && j < ncz) acc += w[j * ncy + (i - 1)];
      if (i < ncy && j < ncz) acc += w[j * ncy + i];
      diag[n] = per_cell * acc;
    }
  };
  if (be == Backend::serial) {
    for (int j = 0; j < nz; ++j) row(j);
    return;
  }
#pragma omp parallel for schedule(static)
  for (int j = 0; j < nz; ++j) row(j);
}

void load_vector(const GridField& g, double lambda, double* b, Backend be) {
  const int ny = g.ny, nz = g.nz, ncy = g.cells_y(), ncz = g.cells_z();
  const double q = lambda * g.hy() * g.hz() * 0.25;
  auto row = [&](int j) {
    for (int i = 0; i < ny; ++i) {
      const int n = j * ny + i;
      if (g.dirichlet(i, j)) {
        b[n] = 0.0;
        continue;
      }
      int cells = 0;
      if (i > 0 && j > 0) ++cells;
      if (i < ncy && j > 0) ++cells;
      if (i > 0 && j < ncz) ++cells;
      if (i < ncy && j < ncz) ++cells;
      b[n] = q * cells;
    }
  };
  if (be == Backend::serial) {
    for (int j = 0; j < nz; ++j) row(j);
    return;
  }
#pragma omp parallel for schedule(static)
  for (int j = 0; j < nz; ++j) row(j);
}

double dot(const GridField& g, const double* a, const double* b, Backend be) {
  const int ny = g.ny, nz = g.nz;
  if (be == Backend::serial) {
    double acc = 0.0;
    for (int n = 0; n < ny * nz; ++n) acc += a[n] * b[n];
    return acc;
  }
  std::vector<double> partial(nz, 0.0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < nz; ++j) {
    double acc = 0.0;
    for (int i = 0; i < ny; ++i) acc += a[j * ny + i] * b[j * ny + i];
    partial[j] = acc;
  }
  double acc = 0.0;
  for (int j = 0; j < nz; ++j) acc += partial[j];
  return acc;
}

double max_abs_free(const GridField& g, const double* a, Backend be) {
  const int ny = g.ny, nz = g.nz;
  if (be == Backend::serial) {
    double m = 0.0;
    for (int j = 0; j < nz; ++j)
      for (int i = 0; i < ny; ++i)
        if (!g.dirichlet(i, j)) m = std::max(m, std::abs(a[j * ny + i]));
    return m;
  }
  std::vector<double> partial(nz, 0.0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < nz; ++j) {
    double m = 0.0;
    for (int i = 0; i < ny; ++i)
      if (!g.dirichlet(i, j)) m = std::max(m, std::abs(a[j * ny + i]));
    partial[j] = m;
  }
  double m = 0.0;
  for (int j = 0; j < nz; ++j) m = std::max(m, partial[j]);
  return m;
}

void axpy(const GridField& g, double alpha, const double* x, double* y, Backend be) {
  const int n = g.ny * g.nz;
  if (be == Backend::serial) {
    for (int k = 0; k < n; ++k) y[k] += alpha * x[k];
    return;
  }
#pragma omp parallel for schedule(static)
  for (int k = 0; k < n; ++k) y[k] += alpha * x[k];
}

void xpby(const GridField& g, const double* x, double beta, double* y, Backend be) {
  const int n = g.ny * g.nz;
  if (be == Backend::serial) {
    for (int k = 0; k < n; ++k) y[k] = x[k] + beta * y[k];
    return;
  }
#pragma omp parallel for schedule(static)
  for (int k = 0; k < n; ++k) y[k] = x[k] + beta * y[k];
}

double energy(const GridField& g, const double* u, double eps, double lambda,
              Backend be) {
  const int ncy = g.cells_y(), ncz = g.cells_z(), ny = g.ny;
  const double hy = g.hy(), hz = g.hz(), area = hy * hz;
  const double ihy = 0.5 / hy, ihz = 0.5 / hz;
  auto cell_row = [&](int jc) {
    const double zc = -g.depth + (jc + 0.5) * hz;
    double acc = 0.0;
    for (int ic = 0; ic < ncy; ++ic) {
      const int n = jc * ny + ic;
      const double usw = u[n], use = u[n + 1], unw = u[n + ny], une = u[n + ny + 1];
      const double gy = (use + une - usw - unw) * ihy;
      const double gz = (unw + une - usw - use) * ihz;
      const double g2 = gy * gy + gz * gz;
      const double mean = 0.25 * (usw + use + unw + une);
      acc += 0.5 * g2 - zc * std::sqrt(eps * eps + g2) - lambda * mean;
    }
    return area * acc;
  };
  if (be == Backend::serial) {
    double acc = 0.0;
    for (int jc = 0; jc < ncz; ++jc) acc += cell_row(jc);
    return acc;
  }
  std::vector<double> partial(ncz, 0.0);
#pragma omp parallel for schedule(static)
  for (int jc = 0; jc < ncz; ++jc) partial[jc] = cell_row(jc);
  double acc = 0.0;
  for (int jc = 0; jc < ncz; ++jc) acc += partial[jc];
  return acc;
}

}  // namespace yieldflow::kernels
