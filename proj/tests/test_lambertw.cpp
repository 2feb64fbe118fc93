#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "mecoff/lambertw.hpp"

using mecoff::lambert_w0;

TEST_CASE("lambert_w0 fixed points") {
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK(lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  // Omega constant, root of z*e^z = 1
  CHECK(lambert_w0(1.0) == doctest::Approx(0.5671432904097839).epsilon(1e-12));
  CHECK(lambert_w0(-1.0 / M_E) == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("lambert_w0 residual across the domain") {
  // dense sweep from the branch point up to 1e6
  const double lo = -1.0 / M_E;
  for (int i = 0; i <= 20000; ++i) {
    const double t = i / 20000.0;
    const double x = lo + (1e6 - lo) * t * t * t;  // cluster near the branch point
    const double z = lambert_w0(x);
    const double residual = std::abs(z * std::exp(z) - x);
    REQUIRE(residual <= 1e-12 * std::max(1.0, std::abs(x)));
  }
}

TEST_CASE("lambert_w0 domain handling") {
  CHECK_THROWS_AS(lambert_w0(-0.5), std::domain_error);
  CHECK_THROWS_AS(lambert_w0(std::nan("")), std::domain_error);
  // rounding noise just below -1/e is clamped, not rejected
  CHECK(lambert_w0(-1.0 / M_E - 1e-14) == doctest::Approx(-1.0).epsilon(1e-6));
}
