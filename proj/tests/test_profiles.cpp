#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "yieldflow/profiles.hpp"

using namespace yieldflow;

TEST_SUITE("profiles") {

TEST_CASE("frozen parameters at lambda = 2 and 1.2") {
  const ProfileParams p2 = make_profile_params(2.0);
  CHECK(p2.scale == doctest::Approx(oracle::kScale2).epsilon(1e-14));
  CHECK(p2.halfspan == doctest::Approx(oracle::kHalfspan2).epsilon(1e-14));
  CHECK(p2.center_depth == doctest::Approx(oracle::kScale2).epsilon(1e-14));
  CHECK(p2.wall_depth == doctest::Approx(oracle::kWallDepth2).epsilon(1e-14));
  CHECK(p2.z_lo == 0.5);
  CHECK(p2.z_hi == 1.0);

  const ProfileParams p12 = make_profile_params(1.2);
  CHECK(p12.scale == doctest::Approx(oracle::kScale12).epsilon(1e-14));
  CHECK(p12.center_depth == doctest::Approx(oracle::kCenterDepth12).epsilon(1e-14));
  CHECK(p12.halfspan == doctest::Approx(oracle::kHalfspan12).epsilon(1e-14));
}

TEST_CASE("scale matches its closed algebraic form") {
  // |scale|/(lambda-1) = 2(lambda+1)sqrt(lambda^2-1) /
  //                      (2 sqrt(lambda^2-1) + pi + 2 asin(1/lambda))
  for (double lam : {1.1, 1.7, 3.0, 10.0}) {
    const double s = std::sqrt(lam * lam - 1.0);
    const double pi = 3.14159265358979323846;
    const double depth =
        2.0 * (lam + 1.0) * s / (2.0 * s + pi + 2.0 * std::asin(1.0 / lam));
    const ProfileParams p = make_profile_params(lam);
    CHECK(-p.center_depth == doctest::Approx(depth).epsilon(1e-12));
  }
}

TEST_CASE("generating map: frozen values, monotonicity, inverse") {
  CHECK(profile_map(2.0, 1.0) == doctest::Approx(oracle::kMap2AtHi).epsilon(1e-14));
  CHECK(profile_map(2.0, 0.5) == doctest::Approx(oracle::kMap2AtLo).epsilon(1e-14));
  CHECK(profile_map(2.0, 0.75) == doctest::Approx(oracle::kMap2AtMid).epsilon(1e-14));
  CHECK(profile_map_derivative(2.0, 0.75) ==
        doctest::Approx(oracle::kMapDeriv2AtMid).epsilon(1e-13));
  CHECK(profile_map_derivative(2.0, 0.5) == 0.0);

  for (double lam : {1.2, 2.0, 5.0}) {
    const ProfileParams p = make_profile_params(lam);
    double prev = -1e300;
    for (int k = 0; k <= 20; ++k) {
      const double Z = p.z_lo + (p.z_hi - p.z_lo) * k / 20.0;
      const double v = profile_map(lam, Z);
      CHECK(v > prev);
      prev = v;
      CHECK(profile_map_inverse(lam, v) ==
            doctest::Approx(Z).epsilon(1e-12).scale(p.z_hi - p.z_lo));
      if (k > 0 && k < 20) CHECK(profile_map_derivative(lam, Z) > 0.0);
    }
    CHECK(profile_map(lam, p.z_lo) == doctest::Approx(p.map_lo).epsilon(1e-15));
    CHECK(profile_map(lam, p.z_hi) == doctest::Approx(p.map_hi).epsilon(1e-15));
  }
}

TEST_CASE("frozen profile point values at lambda = 2") {
  const ProfileParams p = make_profile_params(2.0);
  CHECK(profile_value(p, 0.5) == doctest::Approx(oracle::kPhi2AtHalf).epsilon(1e-13));
  CHECK(profile_slope(p, 0.5) ==
        doctest::Approx(oracle::kPhiSlope2AtHalf).epsilon(1e-13));
  CHECK(profile_second(p, 0.0) ==
        doctest::Approx(oracle::kPhiSecond2At0).epsilon(1e-12));
  CHECK(profile_second(p, 0.5) ==
        doctest::Approx(oracle::kPhiSecond2AtHalf).epsilon(1e-12));
  CHECK(profile_value(p, 0.0) == doctest::Approx(p.center_depth).epsilon(1e-14));
  CHECK(profile_value(p, 1.0) == doctest::Approx(p.wall_depth).epsilon(1e-13));
  CHECK(profile_value(p, -1.0) == doctest::Approx(p.wall_depth).epsilon(1e-13));
}

TEST_CASE("symmetry, monotonicity, convexity") {
  for (double lam : {1.2, 2.0, 5.0}) {
    const ProfileParams p = make_profile_params(lam);
    CHECK(profile_slope(p, 0.0) == 0.0);
    for (double y : {0.15, 0.5, 0.85}) {
      CHECK(profile_value(p, y) == profile_value(p, -y));
      CHECK(profile_slope(p, y) == -profile_slope(p, -y));
      CHECK(profile_slope(p, y) > 0.0);
      CHECK(profile_second(p, y) > 0.0);
    }
    CHECK(profile_value(p, 0.0) < profile_value(p, 0.4));
    CHECK(profile_value(p, 0.4) < profile_value(p, 0.9));
    CHECK(profile_value(p, 0.9) < 0.0);
  }
}

TEST_CASE("slope and curvature agree with finite differences") {
  const ProfileParams p = make_profile_params(1.5);
  const double h = 1e-6;
  for (double y : {0.2, 0.55, 0.8}) {
    const double fd1 = (profile_value(p, y + h) - profile_value(p, y - h)) / (2 * h);
    CHECK(fd1 == doctest::Approx(profile_slope(p, y)).epsilon(1e-8));
    const double fd2 = (profile_slope(p, y + h) - profile_slope(p, y - h)) / (2 * h);
    CHECK(fd2 == doctest::Approx(profile_second(p, y)).epsilon(1e-7));
  }
}

TEST_CASE("closed form satisfies the curvature equation") {
  for (double lam : {1.2, 1.5, 2.0, 5.0}) {
    const ProfileParams p = make_profile_params(lam);
    double worst = 0.0;
    for (int k = 0; k <= 66; ++k) {
      const double y = -0.99 + 1.98 * k / 66.0;
      worst = std::max(worst, std::abs(profile_ode_residual(p, y)));
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(make_profile_params(1.0), std::domain_error);
  CHECK_THROWS_AS(make_profile_params(0.5), std::domain_error);
  CHECK_THROWS_AS(profile_map(2.0, 1.5), std::domain_error);
  CHECK_THROWS_AS(profile_map_inverse(2.0, 10.0), std::domain_error);
  const ProfileParams p = make_profile_params(2.0);
  CHECK_THROWS_AS(profile_value(p, 1.5), std::domain_error);
}

}  // TEST_SUITE
