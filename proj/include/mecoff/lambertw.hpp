#pragma once

namespace mecoff {

// Principal branch of the Lambert W function: returns z with z*exp(z) = x.
// Domain x >= -1/e; arguments a hair below from floating-point rounding are
// clamped to the branch point, anything further out raises std::domain_error.
double lambert_w0(double x);

}  // namespace mecoff
