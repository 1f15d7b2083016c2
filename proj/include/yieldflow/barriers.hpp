#pragma once

#include <array>
#include <vector>

#include "yieldflow/cone.hpp"

namespace yieldflow {

// Parameters of the supersolution built at an auxiliary load lambda1 > lambda:
// a paraboloid lambda1 (1-y^2)/2 capped by theta (L-b)^2, where L is the cone
// chart at lambda1.  Its support is {L <= b}.
struct SupersolutionParams {
  double lambda1 = 0.0;
  double theta = 0.0;  // (lambda1-lambda) / (2 (1+((lambda1-1)/scale1)^2))
  double b = 0.0;      // 1 + sqrt(lambda1/(2 theta)), outer support scale
};

SupersolutionParams make_supersolution_params(double lambda, double lambda1);

// Vertical gap at y = 0 between the outer support curve b*phi_1(y/b) of the
// supersolution at lambda1 and the inner curve phi of the load lambda:
//   pi_gap = -scale1/(lambda1-1) * b + scale/(lambda-1)  > 0.
// It diverges as lambda1 -> lambda+ and as lambda1 -> inf.
double pi_gap(double lambda, double lambda1);

struct Lambda1Result {
  double lambda1 = 0.0;  // minimizer of pi_gap(lambda, .)
  double pi = 0.0;       // minimal gap
  double bracket_lo = 0.0, bracket_hi = 0.0;  // bracket passed to golden search
};

// Minimize pi_gap over lambda1 in (lambda, inf): geometric ladder to bracket
// the V-shaped minimum, then golden section to |d lambda1| <= xtol.
Lambda1Result optimize_lambda1(double lambda, double xtol = 1e-8);

// Largest admissible amplitude of the subsolution at auxiliary load
// lambda0 in (1, lambda):  (lambda-lambda0) / (2 (C + C1 + C2))  with the
// chart bounds taken at lambda0.
double max_zeta0(double lambda, double lambda0);

// Certified barrier pair for a supercritical load: a nonnegative subsolution
// positive on the strip above the inner yield curve, and a supersolution
// vanishing beyond the outer curve.  Any minimizer is squeezed between them.
class BarrierPair {
 public:
  // lambda1 <= 0 requests the optimized value; lambda0 <= 0 the midpoint
  // (1+lambda)/2.
  explicit BarrierPair(double lambda, double lambda1 = 0.0, double lambda0 = 0.0);

  double lambda() const { return lambda_; }
  double lambda0() const { return chart0_.params().lambda; }
  double zeta0() const { return zeta0_; }
  const SupersolutionParams& super() const { return super_; }
  const ConeChart& chart0() const { return chart0_; }
  const ConeChart& chart1() const { return chart1_; }
  const ProfileParams& load_params() const { return load_; }

  // Subsolution value at (y, z), |y| <= 1, z <= 0:
  //   zeta0 (1 - y^2)  outside the cone at lambda0,
  //   zeta0 (1 - L^2)  inside it above the base curve (L <= 1),
  //   0                below the base curve.
  double subsolution(double y, double z) const;

  // Unit direction field paired with the subsolution: (-sign y, 0) outside
  // the cone, the cone transport field inside; continuous off the origin.
  std::array<double, 2> subsolution_direction(double y, double z) const;

  // Supersolution U = min(paraboloid, cap) as described above.
  double supersolution(double y, double z) const;

  // Direction field paired with the supersolution: (-sign y, 0) where the
  // paraboloid is active, the lambda1 transport field beyond the matching
  // contour L = b - sqrt(lambda1 (1-y^2) / (2 theta)).
  std::array<double, 2> supersolution_direction(double y, double z) const;

  // Inner yield curve phi_{lambda}(y) (load profile) and outer support curve
  // b * phi_{lambda1}(y/b); outer < inner everywhere, gap pi_gap at y = 0.
  double inner_curve(double y) const;
  double outer_curve(double y) const;

 private:
  double lambda_ = 0.0;
  double zeta0_ = 0.0;
  SupersolutionParams super_;
  ProfileParams load_;
  ConeChart chart0_;
  ConeChart chart1_;
};

struct SupportCurves {
  std::vector<double> y;
  std::vector<double> inner;
  std::vector<double> outer;
};

SupportCurves support_curves(const BarrierPair& bp, int n);

}  // namespace yieldflow
