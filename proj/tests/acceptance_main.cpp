// Acceptance gate: twelve numbered criteria covering kernel correctness,
// state validity, the backflow measure, and the speed-limit bounds, each
// reported as one [PASS]/[FAIL] line with the measured numbers. Exits 1 if
// any criterion fails. Criteria 1-4 also enforce wall-clock budgets.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dephasim/distinguishability.hpp"
#include "dephasim/dynamics.hpp"
#include "dephasim/kernels.hpp"
#include "dephasim/qsl.hpp"
#include "dephasim/special_functions.hpp"
#include "dephasim/sweep.hpp"

using namespace dephasim;

namespace {

int g_failures = 0;

void report(int index, const char* title, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d (%s): %s\n", pass ? "PASS" : "FAIL", index,
              title, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

struct uniform_stream {
  std::mt19937_64 rng;
  explicit uniform_stream(std::uint64_t seed) : rng(seed) {}
  double next() { return (rng() >> 11) * 0x1.0p-53; }
  double in(double lo, double hi) { return lo + (hi - lo) * next(); }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

ModelParams random_kernel_params(uniform_stream& u) {
  ModelParams p;
  p.alpha = u.in(0.0, 0.2);
  p.mu = u.in(1.0, 8.0);
  p.v = u.in(0.01, 2.0);
  p.omega_c = u.in(0.5, 2.0);
  return p;
}

// ---- criterion 1: closed form vs quadrature for r, s, phi ----

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  uniform_stream u(101);
  double worst = 0.0;
  const int n = 500;
  for (int i = 0; i < n; ++i) {
    const ModelParams p = random_kernel_params(u);
    const double t = u.in(0.0, 10.0);
    const KernelValues c = kernel_closed_form(p, t);
    const KernelValues q = kernel_quadrature(p, t);
    worst = std::max({worst, std::abs(q.r - c.r), std::abs(q.s - c.s),
                      std::abs(q.phi - c.phi)});
  }
  const double secs = seconds_since(t0);
  report(1, "kernel closed form matches quadrature",
         worst < 1e-6 && secs < 60.0,
         fmt("max |difference| = %.3g over %d tuples (limit 1e-6), %.1f s "
             "(limit 60 s)",
             worst, n, secs));
}

// ---- criterion 2: analytic derivatives vs central differences ----

// 9-point (8th-order) central difference of f at t with spacing h.
template <typename F>
auto central_difference_9(F&& f, double t, double h) {
  const auto d1 = f(t + h) - f(t - h);
  const auto d2 = f(t + 2.0 * h) - f(t - 2.0 * h);
  const auto d3 = f(t + 3.0 * h) - f(t - 3.0 * h);
  const auto d4 = f(t + 4.0 * h) - f(t - 4.0 * h);
  return (672.0 * d1 - 168.0 * d2 + 32.0 * d3 - 3.0 * d4) / (840.0 * h);
}

// Step equating the stencil's truncation (~env band^8 h^8 / 630) with its
// roundoff (~2.1 eps mag / h) for a function of magnitude mag whose
// derivative has envelope env and spectral bandwidth band.
double balanced_step(double mag, double env, double band, double t) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double h = std::pow(
      1323.0 * eps * mag / (env * std::pow(band, 8.0)), 1.0 / 9.0);
  return std::clamp(h, 1e-7, 0.2 * t);
}

void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  uniform_stream u(202);
  double worst = 0.0;
  int checked = 0;
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    ModelParams p = random_kernel_params(u);
    p.omega_0 = u.in(0.5, 2.0);
    p.lambda = u.in(0.0, 1.0);
    const double t = u.in(0.05, 8.0);

    // Analytic magnitude envelopes and spectral bandwidths; the comparison
    // is gated where a derivative exceeds 1e-8 on its own envelope scale
    // (plain 1e-8 for order-unity envelopes), below which a double-precision
    // difference quotient carries no information.
    const double chi = 0.5 * (p.mu + p.v);
    const auto moment = [&](double q) {
      return dephasim::gamma(q) * std::pow(p.omega_c, q);
    };
    const double env_r = 4.0 * p.alpha * moment(p.mu + 1.0);
    const double env_s = 2.0 * std::sqrt(p.alpha) * moment(chi + 1.0);
    const double env_phi = std::sqrt(p.alpha) * moment(chi + 1.0);
    const double env_kap = 2.0 * p.omega_0 + env_r + env_s + 2.0 * env_phi;
    const double band_r =
        std::pow(moment(p.mu + 9.0) / moment(p.mu + 1.0), 0.125);
    const double band_chi =
        std::pow(moment(chi + 9.0) / moment(chi + 1.0), 0.125);
    const double mag_r = 8.0 * p.alpha * moment(p.mu);
    const double mag_s =
        0.5 * moment(p.v) + 4.0 * std::sqrt(p.alpha) * moment(chi);
    const double mag_phi = std::sqrt(p.alpha) * moment(chi);

    const KernelValues k = kernel_closed_form(p, t);
    const auto check = [&](double an, double env, double mag, double band,
                           double (*field)(const KernelValues&)) {
      if (env <= 0.0) return;
      if (std::abs(an) <= 1e-8 * std::max(1.0, env)) return;
      const double h = balanced_step(mag + env * t, env, band, t);
      const double fd = central_difference_9(
          [&](double tt) { return field(kernel_closed_form(p, tt)); }, t, h);
      worst = std::max(worst, std::abs(fd - an) / std::abs(an));
      ++checked;
    };
    check(k.r_dot, env_r, mag_r, band_r,
          [](const KernelValues& kv) { return kv.r; });
    check(k.s_dot, env_s, mag_s, band_chi,
          [](const KernelValues& kv) { return kv.s; });
    check(k.phi_dot, env_phi, mag_phi, band_chi,
          [](const KernelValues& kv) { return kv.phi; });

    const complex kd = kappa_dot(p, t);
    if (std::abs(kd) > 1e-8 * std::max(1.0, env_kap)) {
      const double band_kap = env_kap + std::max(band_r, band_chi);
      const double h =
          balanced_step(1.0 + env_kap * t, env_kap, band_kap, t);
      const complex kfd = central_difference_9(
          [&](double tt) { return kappa(p, tt); }, t, h);
      worst = std::max(worst, std::abs(kfd - kd) / std::abs(kd));
      ++checked;
    }
  }
  const double secs = seconds_since(t0);
  report(2, "analytic derivatives match finite differences",
         worst < 1e-4 && secs < 30.0,
         fmt("max relative error = %.3g over %d tuples / %d checks "
             "(limit 1e-4), %.1f s (limit 30 s)",
             worst, n, checked, secs));
}

// ---- criterion 3: decoherence factor bounded, states physical ----

void criterion_3() {
  const auto t0 = std::chrono::steady_clock::now();
  uniform_stream u(303);
  double worst_abs = 0.0;
  double worst_eig = 0.0;
  double worst_trace = 0.0;
  bool all_valid = true;
  const int n = 500;
  for (int i = 0; i < n; ++i) {
    ModelParams p = random_kernel_params(u);
    p.omega_0 = u.in(0.0, 2.0);
    p.lambda = u.in(0.0, 1.0);
    const double pop = u.next();
    p.c_e = complex(std::sqrt(pop), 0.0);
    p.c_g = std::polar(std::sqrt(1.0 - pop), 2.0 * M_PI * u.next());
    const double t = u.in(0.0, 20.0);

    worst_abs = std::max(worst_abs, std::abs(kappa(p, t)));
    const QubitDensityMatrix rho = reduced_state(p, t);
    try {
      rho.validate();
    } catch (...) {
      all_valid = false;
    }
    worst_eig = std::min(worst_eig, rho.min_eigenvalue());
    worst_trace = std::max(
        worst_trace, std::abs(rho.to_matrix().trace().real() - 1.0));
  }
  const double secs = seconds_since(t0);
  report(3, "reduced states stay physical",
         worst_abs <= 1.0 + 1e-12 && all_valid && worst_eig >= -1e-12 &&
             worst_trace <= 1e-15 && secs < 30.0,
         fmt("max |kappa| - 1 = %.3g, min eigenvalue = %.3g, max |trace - 1| "
             "= %.3g over %d tuples, %.1f s (limit 30 s)",
             worst_abs - 1.0, worst_eig, worst_trace, n, secs));
}

// ---- criterion 4: location of the backflow peak on the fig1a grid ----

void criterion_4() {
  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult res = run_sweep(figure_preset("fig1a"));
  double best = -1.0;
  double best_alpha = 0.0;
  double best_mu = 0.0;
  for (const auto& row : res.rows) {
    if (std::isfinite(row.value) && row.value > best) {
      best = row.value;
      best_alpha = row.axis1_value;
      best_mu = row.axis2_value;
    }
  }
  const double secs = seconds_since(t0);
  const bool in_window = best_alpha >= 0.005 && best_alpha <= 0.02 &&
                         best_mu >= 4.0 && best_mu <= 6.0;
  report(4, "fig1a backflow peak location", in_window && secs < 300.0,
         fmt("N max = %.6g at alpha = %.6g, mu = %.6g (window alpha in "
             "[0.005, 0.02], mu in [4, 6]), %.1f s (limit 300 s)",
             best, best_alpha, best_mu, secs));
}

// ---- criterion 5: backflow onset between tau = 0.5 and 0.65 ----

void criterion_5() {
  const ModelParams p;  // mu 5, alpha 0.01, v 0.01
  const double n_05 = non_markovianity_partial(p, 0.5);
  const double n_065 = non_markovianity_partial(p, 0.65);
  const NonMarkovReport rep = non_markovianity(p, 5.0);
  const double t1 = rep.intervals.empty() ? -1.0 : rep.intervals[0].first;
  const bool pass =
      n_05 == 0.0 && n_065 > 0.0 && t1 >= 0.53 && t1 <= 0.63;
  report(5, "fig3b backflow onset", pass,
         fmt("N(0.5) = %.3g, N(0.65) = %.3g, first rate zero at t = %.6g "
             "(window [0.53, 0.63])",
             n_05, n_065, t1));
}

// ---- criterion 6: bound ordering and early coincidence across Ohmicity ----

void criterion_6() {
  ModelParams p5;
  p5.lambda = 0.25;
  ModelParams p8 = p5;
  p8.mu = 8.0;

  double min_margin = 1e300;
  bool ordered = true;
  for (int i = 0; i < 24; ++i) {
    const double tau = 0.7 + (3.0 - 0.7) * i / 23.0;
    const double q5 = qsl_correlated(p5, tau);
    const double q8 = qsl_correlated(p8, tau);
    min_margin = std::min(min_margin, q8 - q5);
    if (!(q5 < q8)) ordered = false;
  }

  double max_gap = 0.0;
  for (int i = 0; i < 9; ++i) {
    const double tau = 0.1 + (0.5 - 0.1) * i / 8.0;
    const double q5 = qsl_correlated(p5, tau);
    const double q8 = qsl_correlated(p8, tau);
    max_gap = std::max(max_gap, std::abs(q5 - q8) / std::max(q5, q8));
  }

  report(6, "fig3a bound ordering across Ohmicity",
         ordered && max_gap <= 0.02,
         fmt("tau in [0.7, 3]: min(q(mu=8) - q(mu=5)) = %.4g (need > 0); "
             "tau in [0.1, 0.5]: max relative gap = %.3g (limit 0.02)",
             min_margin, max_gap));
}

// ---- criterion 7: bound non-increasing in the correlation ----

void criterion_7() {
  const double lambdas[4] = {0.25, 0.5, 0.75, 1.0};
  double worst_rise = 0.0;
  for (double mu : {5.0, 8.0}) {
    for (int i = 0; i < 20; ++i) {
      const double tau = 0.15 + (3.0 - 0.15) * i / 19.0;
      double prev = 1e300;
      for (double lambda : lambdas) {
        ModelParams p;
        p.mu = mu;
        p.lambda = lambda;
        const double q = qsl_correlated(p, tau);
        worst_rise = std::max(worst_rise, q - prev);
        prev = q;
      }
    }
  }
  report(7, "fig4a bound monotone in correlation", worst_rise <= 1e-12,
         fmt("max increase along lambda in {0.25, 0.5, 0.75, 1} = %.3g over "
             "20 tau points and mu in {5, 8} (limit 1e-12)",
             worst_rise));
}

// ---- criterion 8: initial coherence and bound decay with correlation ----

void criterion_8() {
  ModelParams p;
  const double c_at_0 = [&] {
    ModelParams q = p;
    q.lambda = 0.0;
    return coherence_l1(q, 0.0);
  }();
  const double c_at_1 = [&] {
    ModelParams q = p;
    q.lambda = 1.0;
    return coherence_l1(q, 0.0);
  }();

  bool strictly_decreasing = true;
  double prev_c = 2.0;
  for (int i = 0; i <= 10; ++i) {
    ModelParams q = p;
    q.lambda = 0.1 * i;
    const double c = coherence_l1(q, 0.0);
    if (!(c < prev_c)) strictly_decreasing = false;
    prev_c = c;
  }

  double worst_rise = 0.0;
  for (double mu : {5.0, 8.0}) {
    double prev_q = 1e300;
    for (int i = 0; i <= 10; ++i) {
      ModelParams q = p;
      q.mu = mu;
      q.lambda = 0.1 * i;
      const double b = qsl_correlated(q, 1.0);
      worst_rise = std::max(worst_rise, b - prev_q);
      prev_q = b;
    }
  }

  const bool pass = std::abs(c_at_0 - 1.0) <= 1e-12 && c_at_1 < 1e-10 &&
                    strictly_decreasing && worst_rise <= 1e-12;
  report(8, "fig5 coherence and bound decrease with correlation", pass,
         fmt("C(0) - 1 = %.3g, C(1) = %.3g, strictly decreasing: %s, max "
             "bound increase = %.3g",
             c_at_0 - 1.0, c_at_1, strictly_decreasing ? "yes" : "no",
             worst_rise));
}

// ---- criterion 9: bound saturates in the coupling ----

void criterion_9() {
  ModelParams p;
  p.lambda = 0.25;
  auto q_at = [&](double alpha) {
    ModelParams q = p;
    q.alpha = alpha;
    return qsl_correlated(q, 1.0);
  };
  const double q001 = q_at(0.01);
  const double q01 = q_at(0.1);
  const double q02 = q_at(0.2);
  const double rel_change = std::abs(q02 - q01) / q01;
  report(9, "fig6a bound saturates in the coupling",
         q01 > q001 && rel_change < 0.05,
         fmt("q(0.01) = %.6g, q(0.1) = %.6g, q(0.2) = %.6g, relative change "
             "= %.3g (limit 0.05)",
             q001, q01, q02, rel_change));
}

// ---- criterion 10: free-precession closed form ----

void criterion_10() {
  ModelParams p;
  p.alpha = 0.0;
  p.lambda = 0.0;
  p.omega_0 = 1.0;
  const double q = qsl_correlated(p, M_PI / 2.0);
  const double target = 2.0 / M_PI;
  report(10, "free-precession bound closed form",
         std::abs(q - target) <= 1e-8 * target,
         fmt("bound = %.12g, 2/pi = %.12g, |difference| = %.3g (limit 1e-8 "
             "relative)",
             q, target, std::abs(q - target)));
}

// ---- criterion 11: specialized bound vs generic pipeline ----

void criterion_11() {
  uniform_stream u(1111);
  double worst_rel = 0.0;
  double worst_order = 0.0;
  bool unified_is_ml = true;
  const int n = 100;
  for (int i = 0; i < n; ++i) {
    ModelParams p = random_kernel_params(u);
    p.omega_0 = u.in(0.5, 2.0);
    p.lambda = u.in(0.0, 0.9);
    const double tau = u.in(0.2, 3.0);

    const QslConsistency c = qsl_consistency_check(p, tau);
    worst_rel = std::max(worst_rel, c.rel_diff);

    const double op = averaged_norm(p, tau, NormKind::operator_norm);
    const double hs = averaged_norm(p, tau, NormKind::hilbert_schmidt);
    const double tr = averaged_norm(p, tau, NormKind::trace_norm);
    worst_order = std::max({worst_order, op - hs, hs - tr});

    if (qsl_unified(p, tau) != qsl_ml(p, tau)) unified_is_ml = false;
  }
  report(11, "specialized bound consistent with generic pipeline",
         worst_rel <= 1e-8 && worst_order <= 1e-12 && unified_is_ml,
         fmt("max relative difference = %.3g over %d tuples (limit 1e-8), "
             "max norm-order violation = %.3g, unified == op-norm bound: %s",
             worst_rel, n, worst_order, unified_is_ml ? "yes" : "no"));
}

// ---- criterion 12: interval sum vs rectified-rate integral ----

void criterion_12() {
  uniform_stream u(1212);
  double worst = 0.0;
  const int n = 20;
  const double horizon = 20.0;
  const int npts = 100000;
  for (int i = 0; i < n; ++i) {
    ModelParams p;
    p.alpha = u.in(0.003, 0.1);
    p.mu = u.in(1.2, 8.0);
    const double n_intervals = non_markovianity_partial(p, horizon);
    const double dt = horizon / (npts - 1);
    double trap = 0.0;
    double prev = std::max(sigma(p, 0.0), 0.0);
    for (int k = 1; k < npts; ++k) {
      const double cur = std::max(sigma(p, k * dt), 0.0);
      trap += 0.5 * (prev + cur) * dt;
      prev = cur;
    }
    worst = std::max(worst, std::abs(n_intervals - trap));
  }
  report(12, "backflow interval sum matches rectified-rate integral",
         worst < 1e-5,
         fmt("max |interval sum - trapezoid(1e5 points)| = %.3g over %d "
             "tuples (limit 1e-5)",
             worst, n));
}

}  // namespace

int main() {
  std::printf("acceptance gate: dephasing dynamics, backflow, speed limits\n");
  using fn = void (*)();
  const fn criteria[12] = {criterion_1, criterion_2,  criterion_3,
                           criterion_4, criterion_5,  criterion_6,
                           criterion_7, criterion_8,  criterion_9,
                           criterion_10, criterion_11, criterion_12};
  for (int i = 0; i < 12; ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      report(i + 1, "unexpected exception", false, e.what());
    }
  }
  std::printf("%d of 12 criteria passed\n", 12 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
