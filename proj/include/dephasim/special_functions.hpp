#pragma once

// Gamma function via the Lanczos approximation (g = 7, 9 coefficients),
// accurate to better than 1e-10 relative error on (0, 50].

namespace dephasim {

// Gamma(x) for x > 0 (reflection formula extends to non-integer x < 0,
// but callers here only need x > 0). Throws std::domain_error for x <= 0
// or non-finite x.
double gamma(double x);

}  // namespace dephasim
