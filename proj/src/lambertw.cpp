#include "mecoff/lambertw.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mecoff {

namespace {

constexpr double kInvE = 0.36787944117144233;  // 1/e

// Expansion around the branch point x = -1/e in q = sqrt(2(e*x + 1)).
double branch_point_series(double q) {
  const double c2 = -1.0 / 3.0;
  const double c3 = 11.0 / 72.0;
  const double c4 = -43.0 / 540.0;
  const double c5 = 769.0 / 17280.0;
  const double c6 = -221.0 / 8505.0;
  return -1.0 + q * (1.0 + q * (c2 + q * (c3 + q * (c4 + q * (c5 + q * c6)))));
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x)) throw std::domain_error("lambert_w0: NaN argument");
  if (x < -kInvE) {
    if (x < -kInvE - 1e-12) {
      throw std::domain_error("lambert_w0: argument " + std::to_string(x) +
                              " below -1/e");
    }
    x = -kInvE;  // rounding noise from callers forming B*exp(-1)
  }
  if (x == 0.0) return 0.0;

  const double q = std::sqrt(2.0 * std::fma(M_E, x, 1.0));
  if (q < 1e-3) return branch_point_series(q);  // Halley is ill-conditioned here

  double w;
  if (x < -0.2) {
    w = branch_point_series(q);
  } else if (x < 2.0) {
    w = x / (1.0 + x);
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }

  for (int it = 0; it < 40; ++it) {
    const double e = std::exp(w);
    const double f = w * e - x;
    const double wp1 = w + 1.0;
    const double denom = e * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace mecoff
