#include "dephasim/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dephasim/quadrature.hpp"
#include "dephasim/special_functions.hpp"

namespace dephasim {

namespace {

constexpr double pi = 3.14159265358979323846;

void check_time(double t) {
  if (!std::isfinite(t)) throw std::domain_error("kernel: time must be finite");
  if (t < 0.0) throw std::domain_error("kernel: time must be non-negative");
}

// Closed form of Int_0^inf w^{p-1} e^{-w/wc} cos(wt) dw
//   = Gamma(p) wc^p cos(p arctan(wc t)) / (1 + wc^2 t^2)^{p/2},
// and the companion sine integral with cos -> sin.
struct LaplacePair {
  double cosine;
  double sine;
};

LaplacePair laplace_power(double p, double wc, double t) {
  const double x = wc * t;
  const double angle = p * std::atan(x);
  const double scale =
      gamma(p) * std::pow(wc, p) / std::pow(1.0 + x * x, 0.5 * p);
  return {scale * std::cos(angle), scale * std::sin(angle)};
}

}  // namespace

KernelValues kernel_closed_form(const ModelParams& params, double t) {
  params.validate();
  check_time(t);

  const double a = params.alpha;
  const double mu = params.mu;
  const double v = params.v;
  const double wc = params.omega_c;
  const double chi = params.chi();
  const double sqrt_a = std::sqrt(a);

  const double g_mu = gamma(mu) * std::pow(wc, mu);
  const double g_chi = gamma(chi) * std::pow(wc, chi);
  const double g_v = gamma(v) * std::pow(wc, v);
  const double g_mu1 = gamma(mu + 1.0) * std::pow(wc, mu + 1.0);
  const double g_chi1 = gamma(chi + 1.0) * std::pow(wc, chi + 1.0);

  const double x = wc * t;
  const double atan_x = std::atan(x);
  const double log_d = std::log1p(x * x);

  // decay(p) = cos(p arctan x)/(1+x^2)^{p/2}; grow(p) the sine companion.
  const auto decay_cos = [&](double p) {
    return std::cos(p * atan_x) * std::exp(-0.5 * p * log_d);
  };
  const auto decay_sin = [&](double p) {
    return std::sin(p * atan_x) * std::exp(-0.5 * p * log_d);
  };

  KernelValues kv;
  kv.t = t;
  kv.r = 4.0 * a * g_mu * (1.0 - decay_cos(mu));
  kv.s = 2.0 * sqrt_a * g_chi * (1.0 - decay_cos(chi)) - 0.5 * g_v;
  kv.phi = sqrt_a * g_chi * decay_sin(chi);
  kv.r_dot = 4.0 * a * g_mu1 * decay_sin(mu + 1.0);
  kv.s_dot = 2.0 * sqrt_a * g_chi1 * decay_sin(chi + 1.0);
  kv.phi_dot = sqrt_a * g_chi1 * decay_cos(chi + 1.0);
  return kv;
}

KernelValues kernel_quadrature(const ModelParams& params, double t) {
  params.validate();
  check_time(t);

  const double a = params.alpha;
  const double mu = params.mu;
  const double v = params.v;
  const double wc = params.omega_c;
  const double chi = params.chi();
  const double sqrt_a = std::sqrt(a);
  const double tol = 1e-9;

  // Frequency-axis truncation. The discarded tail of
  // pref * Int_{wmax}^inf w^{p-1} e^{-w/wc} * osc dw is bounded (for
  // wmax >= 2(p-1) wc) by pref * c_osc * 2 wc * wmax^{p-1} max(wmax,1)
  // * exp(-wmax/wc); require that below tol/2 for every integral used.
  // Start just past the widest integrand's peak (w ~ (mu+v) wc) and double
  // until the bound holds; a lean wmax keeps the panel count small.
  double wmax = wc * (4.0 * (mu + v) + 10.0);
  const auto tail_bound = [&](double pref, double c_osc, double p) {
    return pref * c_osc * 2.0 * wc * std::pow(wmax, p - 1.0) *
           std::max(wmax, 1.0) * std::exp(-wmax / wc);
  };
  const auto worst_tail = [&]() {
    double worst = tail_bound(0.5, 1.0, v);  // the static s-offset integral
    if (a > 0.0) {
      worst = std::max(worst, tail_bound(4.0 * a, 2.0, mu));
      worst = std::max(worst, tail_bound(2.0 * sqrt_a, 2.0, chi));
      worst = std::max(worst, tail_bound(sqrt_a, 1.0, chi));
      worst = std::max(worst, tail_bound(4.0 * a, 1.0, mu + 1.0));
      worst = std::max(worst, tail_bound(2.0 * sqrt_a, 1.0, chi + 1.0));
      worst = std::max(worst, tail_bound(sqrt_a, 1.0, chi + 1.0));
    }
    return worst;
  };
  int doublings = 0;
  while (worst_tail() >= 0.5 * tol) {
    if (++doublings > 8) {
      throw QuadratureError(
          "kernel_quadrature: frequency-axis truncation bound does not meet "
          "the tolerance");
    }
    wmax *= 2.0;
  }

  // Static offset Int_0^wmax w^{v-1} e^{-w/wc} dw. For v < 1 the integrand
  // is singular at w = 0; substituting u = (w/wc)^v turns it into the
  // boundary-layer-smooth (wc^v/v) Int_0^U exp(-u^{1/v}) du, U=(wmax/wc)^v.
  double s_offset;
  if (v >= 1.0) {
    s_offset = adaptive_gk15(
        [&](double w) { return std::pow(w, v - 1.0) * std::exp(-w / wc); },
        0.0, wmax, 0.5 * tol);
  } else {
    const double u_max = std::pow(wmax / wc, v);
    const double jac = std::pow(wc, v) / v;
    s_offset = jac * adaptive_gk15(
                         [&](double u) {
                           return std::exp(-std::pow(u, 1.0 / v));
                         },
                         0.0, u_max, 0.5 * tol / jac);
  }

  KernelValues kv;
  kv.t = t;
  kv.s = -0.5 * s_offset;

  if (a > 0.0) {
    const double panel_osc =
        (t > 0.0) ? pi / (4.0 * t) : 0.0;  // 0 = one initial panel
    const auto integrate = [&](auto&& f, double pref) {
      return pref * adaptive_gk15(f, 0.0, wmax, tol / pref, panel_osc);
    };
    // 1 - cos(wt) computed as 2 sin^2(wt/2) to avoid cancellation.
    const auto one_minus_cos = [&](double w) {
      const double s_half = std::sin(0.5 * w * t);
      return 2.0 * s_half * s_half;
    };

    kv.r = integrate(
        [&](double w) {
          return std::pow(w, mu - 1.0) * std::exp(-w / wc) * one_minus_cos(w);
        },
        4.0 * a);
    const double s_osc = integrate(
        [&](double w) {
          return std::pow(w, chi - 1.0) * std::exp(-w / wc) * one_minus_cos(w);
        },
        2.0 * sqrt_a);
    kv.s += s_osc;
    kv.phi = integrate(
        [&](double w) {
          return std::pow(w, chi - 1.0) * std::exp(-w / wc) * std::sin(w * t);
        },
        sqrt_a);
    kv.r_dot = integrate(
        [&](double w) {
          return std::pow(w, mu) * std::exp(-w / wc) * std::sin(w * t);
        },
        4.0 * a);
    kv.s_dot = integrate(
        [&](double w) {
          return std::pow(w, chi) * std::exp(-w / wc) * std::sin(w * t);
        },
        2.0 * sqrt_a);
    kv.phi_dot = integrate(
        [&](double w) {
          return std::pow(w, chi) * std::exp(-w / wc) * std::cos(w * t);
        },
        sqrt_a);
  }
  return kv;
}

}  // namespace dephasim
