#pragma once

#include "yieldflow/grid.hpp"

// Grid kernels for the regularized-energy solver.  Every kernel has a plain
// serial reference path and an OpenMP path selected at runtime; the parallel
// reductions accumulate fixed per-row partial sums so results are identical
// for any thread count.  Scatter-type updates are split into a cell pass and
// a node gather pass, so the parallel path needs no atomics and matches the
// serial path bit for bit on elementwise outputs.
namespace yieldflow::kernels {

enum class Backend { serial, parallel };

// Honor the YIELDFLOW_THREADS environment cap (no-op without OpenMP).
void apply_thread_cap();
int thread_count();

// Per-cell bilinear gradients: gy, gz sized cells_y()*cells_z().
void cell_gradients(const GridField& g, const double* u, double* gy, double* gz,
                    Backend be);

// w_c = 1 + |z_c| / sqrt(eps^2 + gy^2 + gz^2) at cell centers.
void cell_weights(const GridField& g, const double* gy, const double* gz,
                  double eps, double* w, Backend be);

// out = A_w x where A_w is the weighted five-cell stencil of the quadratic
// form sum_c hy*hz*w_c*|grad_c x|^2 / 2 on free nodes (Dirichlet rows give 0).
// fy, fz are cell-sized scratch arrays.
void apply_weighted(const GridField& g, const double* w, const double* x,
                    double* fy, double* fz, double* out, Backend be);

// Diagonal of A_w (free nodes; 1.0 on Dirichlet nodes so it can precondition).
void weighted_diagonal(const GridField& g, const double* w, double* diag, Backend be);

// Load vector b_n = lambda * hy*hz/4 * (number of cells touching node n),
// zero on Dirichlet nodes.
void load_vector(const GridField& g, double lambda, double* b, Backend be);

// Deterministic dot product over all nodes.
double dot(const GridField& g, const double* a, const double* b, Backend be);

// Max absolute value over free nodes.
double max_abs_free(const GridField& g, const double* a, Backend be);

// y += alpha * x  /  y = x + beta * y (elementwise over all nodes).
void axpy(const GridField& g, double alpha, const double* x, double* y, Backend be);
void xpby(const GridField& g, const double* x, double beta, double* y, Backend be);

// Discrete energy  sum_c hy*hz*[ |g_c|^2/2 + |z_c| sqrt(eps^2+|g_c|^2)
//                                - lambda * cellmean(u) ].
double energy(const GridField& g, const double* u, double eps, double lambda,
              Backend be);

}  // namespace yieldflow::kernels
