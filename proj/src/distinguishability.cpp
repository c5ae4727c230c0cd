#include "dephasim/distinguishability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dephasim/kernels.hpp"
#include "dephasim/special_functions.hpp"

namespace dephasim {

namespace {

void check_exponent(int exponent) {
  if (exponent != 1 && exponent != 2)
    throw std::invalid_argument("exponent must be 1 or 2");
}

// Dephasing exponent alone (cheaper than the full kernel bundle).
double r_of(const ModelParams& p, double t) {
  const double x = p.omega_c * t;
  const double pref = 4.0 * p.alpha * gamma(p.mu) * std::pow(p.omega_c, p.mu);
  return pref * (1.0 - std::cos(p.mu * std::atan(x)) *
                           std::exp(-0.5 * p.mu * std::log1p(x * x)));
}

// sign(r_dot(t)) = sign(sin((mu+1) atan(omega_c t))): the positive prefactor
// 4 a Gamma(mu+1) wc^{mu+1} / (1+x^2)^{(mu+1)/2} drops out, so the sign can
// be scanned without evaluating the kernel.
struct RdotSign {
  double mu_plus_1;
  double wc;
  double operator()(double t) const {
    return std::sin(mu_plus_1 * std::atan(wc * t));
  }
};

double distance_of_r(double r, int exponent) {
  return std::exp(-static_cast<double>(exponent) * r);
}

// Locate the sign change of g inside (lo, hi] to |dt| < 1e-10.
double bisect_zero(const RdotSign& g, double lo, double hi) {
  double f_lo = g(lo);
  for (int i = 0; i < 200 && (hi - lo) > 1e-10; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = g(mid);
    if ((f_lo < 0.0) == (f_mid < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Zeros of r_dot inside (t_from, t_to], found by dense scanning with the
// given step followed by bisection. Appends in increasing order.
void scan_zeros(const RdotSign& g, double t_from, double t_to, double step,
                std::vector<double>* zeros) {
  if (!(t_to > t_from)) return;
  const std::size_t n =
      static_cast<std::size_t>(std::ceil((t_to - t_from) / step));
  double prev_t = t_from;
  double prev_g = g(prev_t);
  for (std::size_t i = 1; i <= n; ++i) {
    const double t =
        (i == n) ? t_to
                 : t_from + (t_to - t_from) * static_cast<double>(i) /
                               static_cast<double>(n);
    const double cur_g = g(t);
    if ((prev_g < 0.0) != (cur_g < 0.0)) {
      zeros->push_back(bisect_zero(g, prev_t, t));
    }
    prev_t = t;
    prev_g = cur_g;
  }
}

// Accumulate backflow intervals on [0, horizon] from the ordered zeros.
// r_dot > 0 on the first stretch (distance shrinking), so growth intervals
// are (z_1, z_2), (z_3, z_4), ... with a trailing interval clipped at the
// horizon when the count is odd.
struct IntervalSum {
  double n_value = 0.0;
  std::vector<std::pair<double, double>> intervals;
};

IntervalSum sum_intervals(const ModelParams& p, const std::vector<double>& zeros,
                          double horizon, int exponent) {
  IntervalSum out;
  for (std::size_t i = 0; i + 1 < zeros.size(); i += 2) {
    const double a = zeros[i];
    const double b = zeros[i + 1];
    out.intervals.emplace_back(a, b);
    out.n_value += distance_of_r(r_of(p, b), exponent) -
                   distance_of_r(r_of(p, a), exponent);
  }
  if (zeros.size() % 2 == 1) {
    const double a = zeros.back();
    out.intervals.emplace_back(a, horizon);
    out.n_value += distance_of_r(r_of(p, horizon), exponent) -
                   distance_of_r(r_of(p, a), exponent);
  }
  return out;
}

void check_positive(double x, const char* name) {
  if (!std::isfinite(x) || x <= 0.0)
    throw std::invalid_argument(std::string(name) + " must be positive");
}

}  // namespace

double trace_distance(const QubitDensityMatrix& a, const QubitDensityMatrix& b) {
  const double dp = a.p_ee - b.p_ee;
  const complex dc = a.coh - b.coh;
  return std::sqrt(dp * dp + std::norm(dc));
}

double optimal_pair_distance(const ModelParams& params, double t, int exponent) {
  params.validate();
  check_exponent(exponent);
  if (!std::isfinite(t) || t < 0.0)
    throw std::domain_error("optimal_pair_distance: time must be non-negative");
  return distance_of_r(r_of(params, t), exponent);
}

double sigma(const ModelParams& params, double t, int exponent) {
  check_exponent(exponent);
  const KernelValues kv = kernel_closed_form(params, t);
  const double e = static_cast<double>(exponent);
  return -e * kv.r_dot * std::exp(-e * kv.r);
}

NonMarkovReport non_markovianity(const ModelParams& params, double horizon,
                                 int exponent, double tol) {
  params.validate();
  check_exponent(exponent);
  check_positive(horizon, "horizon");
  check_positive(tol, "tol");

  NonMarkovReport report;
  report.exponent = exponent;
  report.horizon = horizon;
  if (params.alpha == 0.0) return report;  // distance is constant

  const RdotSign g{params.mu + 1.0, params.omega_c};
  const double step = std::min(0.01 / params.omega_c, horizon / 1e4);

  std::vector<double> zeros;
  double h = horizon;
  scan_zeros(g, 0.0, h, step, &zeros);
  IntervalSum current = sum_intervals(params, zeros, h, exponent);

  report.converged = false;
  for (int k = 0; k < 4; ++k) {
    const double h2 = 2.0 * h;
    scan_zeros(g, h, h2, step, &zeros);
    const IntervalSum next = sum_intervals(params, zeros, h2, exponent);
    const double delta = std::abs(next.n_value - current.n_value);
    h = h2;
    current = next;
    if (delta < tol) {
      report.converged = true;
      break;
    }
  }
  report.horizon = h;
  report.n_value = current.n_value;
  report.intervals = std::move(current.intervals);
  return report;
}

double non_markovianity_partial(const ModelParams& params, double tau,
                                int exponent) {
  params.validate();
  check_exponent(exponent);
  check_positive(tau, "tau");
  if (params.alpha == 0.0) return 0.0;

  const RdotSign g{params.mu + 1.0, params.omega_c};
  const double step = std::min(0.01 / params.omega_c, tau / 1e4);
  std::vector<double> zeros;
  scan_zeros(g, 0.0, tau, step, &zeros);
  return sum_intervals(params, zeros, tau, exponent).n_value;
}

}  // namespace dephasim
