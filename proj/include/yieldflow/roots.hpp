#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace yieldflow {

// Thrown when an iterative scheme exhausts its budget without meeting its
// tolerance.  CLI maps this to a dedicated exit code.
class convergence_error : public std::runtime_error {
 public:
  explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

struct RootOptions {
  double xtol = 1e-15;      // relative bracket-width target
  double ftol = 0.0;        // optional early exit on |f|
  int max_iter = 200;
  double guess = 0.0;       // optional initial guess inside the bracket
  bool has_guess = false;
};

// Root of a continuous scalar function on a bracketing interval [lo, hi]
// (f(lo) and f(hi) of opposite sign).  Newton steps are taken when a
// derivative is supplied and the step stays inside the current bracket;
// otherwise the method falls back to bisection, so convergence is guaranteed.
double solve_bracketed(const std::function<double(double)>& f,
                       const std::function<double(double)>& df,
                       double lo, double hi, const RootOptions& opt = {});

inline double solve_bracketed(const std::function<double(double)>& f,
                              double lo, double hi, const RootOptions& opt = {}) {
  return solve_bracketed(f, nullptr, lo, hi, opt);
}

struct GoldenResult {
  double x = 0.0;
  double value = 0.0;
};

// Golden-section minimization of a unimodal function on [lo, hi].
GoldenResult golden_minimize(const std::function<double(double)>& f,
                             double lo, double hi, double xtol, int max_iter = 500);

}  // namespace yieldflow
