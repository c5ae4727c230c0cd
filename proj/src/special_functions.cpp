#include "dephasim/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace dephasim {

namespace {

// Lanczos coefficients, g = 7, n = 9 (classic Godfrey/Numerical-Recipes set).
constexpr double lanczos_g = 7.0;
constexpr double lanczos_c[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

double lanczos_gamma(double x) {
  if (x < 0.5) {
    // Reflection: Gamma(x) = pi / (sin(pi x) * Gamma(1 - x)).
    const double pi = 3.14159265358979323846;
    return pi / (std::sin(pi * x) * lanczos_gamma(1.0 - x));
  }
  const double z = x - 1.0;
  double a = lanczos_c[0];
  for (int i = 1; i < 9; ++i) a += lanczos_c[i] / (z + static_cast<double>(i));
  const double t = z + lanczos_g + 0.5;
  const double sqrt_two_pi = 2.50662827463100050242;
  return sqrt_two_pi * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

}  // namespace

double gamma(double x) {
  if (!std::isfinite(x)) throw std::domain_error("gamma: argument must be finite");
  if (x <= 0.0) throw std::domain_error("gamma: argument must be positive");
  return lanczos_gamma(x);
}

}  // namespace dephasim
