#include "dephasim/qsl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dephasim/dynamics.hpp"
#include "dephasim/quadrature.hpp"

namespace dephasim {

namespace {

constexpr double pi = 3.14159265358979323846;

void check_tau(double tau) {
  if (!std::isfinite(tau) || tau <= 0.0)
    throw std::invalid_argument("tau must be positive");
}

double time_panel_width(double tau, double omega_0) {
  double w = tau / 4.0;
  if (omega_0 > 0.0) w = std::min(w, pi / (8.0 * omega_0));
  return w;
}

// tr[a b] for Hermitian 2x2 states in (population, coherence) form.
double state_overlap(const QubitDensityMatrix& a, const QubitDensityMatrix& b) {
  return a.p_ee * b.p_ee + (1.0 - a.p_ee) * (1.0 - b.p_ee) +
         2.0 * (a.coh * std::conj(b.coh)).real();
}

double pick_norm(const MatrixNorms& n, NormKind which) {
  switch (which) {
    case NormKind::operator_norm:
      return n.operator_norm;
    case NormKind::trace_norm:
      return n.trace_norm;
    case NormKind::hilbert_schmidt:
      return n.hilbert_schmidt;
  }
  throw std::logic_error("unknown norm kind");
}

// sin^2(theta) tr[rho0^2]: the displacement part shared by all generic
// bounds. Zero displacement short-circuits the bounds to 0.
double displacement_numerator(const ModelParams& params, double tau) {
  const QubitDensityMatrix rho0 = reduced_state(params, 0.0);
  const double purity = state_overlap(rho0, rho0);
  const double theta = relative_purity_angle(params, tau);
  const double s = std::sin(theta);
  return s * s * purity;
}

double integral_abs_kappa_dot(const ModelParams& params, double tau) {
  return adaptive_gk15(
      [&](double t) { return std::abs(kappa_dot(params, t)); }, 0.0, tau,
      1e-10, time_panel_width(tau, params.omega_0));
}

}  // namespace

MatrixNorms matrix_norms(const Eigen::Matrix2cd& m) {
  const double total = std::norm(m(0, 0)) + std::norm(m(0, 1)) +
                       std::norm(m(1, 0)) + std::norm(m(1, 1));
  const complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const double d = std::abs(det);
  const double sum_sv = std::sqrt(std::max(total + 2.0 * d, 0.0));
  const double diff_sv = std::sqrt(std::max(total - 2.0 * d, 0.0));
  MatrixNorms n;
  n.trace_norm = sum_sv;
  n.operator_norm = 0.5 * (sum_sv + diff_sv);
  n.hilbert_schmidt = std::sqrt(total);
  return n;
}

double relative_purity_angle(const ModelParams& params, double tau) {
  params.validate();
  check_tau(tau);
  const QubitDensityMatrix rho0 = reduced_state(params, 0.0);
  const QubitDensityMatrix rho_tau = reduced_state(params, tau);
  const double purity = state_overlap(rho0, rho0);
  const double overlap = state_overlap(rho0, rho_tau);
  const double ratio = std::clamp(overlap / purity, 0.0, 1.0);
  return std::acos(std::sqrt(ratio));
}

double averaged_norm(const ModelParams& params, double tau, NormKind which) {
  params.validate();
  check_tau(tau);
  const double integral = adaptive_gk15(
      [&](double t) {
        return pick_norm(matrix_norms(generator_value(params, t)), which);
      },
      0.0, tau, 1e-10, time_panel_width(tau, params.omega_0));
  return integral / tau;
}

double qsl_ml(const ModelParams& params, double tau) {
  const double num = displacement_numerator(params, tau);
  if (num <= 0.0) return 0.0;
  const double l_op = averaged_norm(params, tau, NormKind::operator_norm);
  const double l_tr = averaged_norm(params, tau, NormKind::trace_norm);
  return num * std::max(1.0 / l_op, 1.0 / l_tr);
}

double qsl_mt(const ModelParams& params, double tau) {
  const double num = displacement_numerator(params, tau);
  if (num <= 0.0) return 0.0;
  const double l_hs = averaged_norm(params, tau, NormKind::hilbert_schmidt);
  return num / l_hs;
}

double qsl_unified(const ModelParams& params, double tau) {
  return std::max(qsl_ml(params, tau), qsl_mt(params, tau));
}

double qsl_correlated(const ModelParams& params, double tau,
                      Convention convention) {
  params.validate();
  check_tau(tau);
  if (std::abs(std::abs(params.c_e) - inv_sqrt2) > 1e-9 ||
      std::abs(std::abs(params.c_g) - inv_sqrt2) > 1e-9)
    throw std::invalid_argument(
        "qsl_correlated requires the balanced superposition |c_e| = |c_g| = "
        "1/sqrt(2)");

  const complex k0c = kappa(params, 0.0);
  if (std::abs(k0c.imag()) > 1e-12)
    throw std::logic_error("kappa(0) must be real");
  const double k0 = k0c.real();
  const complex kt = kappa(params, tau);
  const double numerator = std::max(0.0, k0 * k0 - k0 * kt.real());
  if (numerator == 0.0) return 0.0;

  const double denom = integral_abs_kappa_dot(params, tau);
  const double printed = numerator / denom;
  return convention == Convention::as_printed ? printed : tau * printed;
}

QslConsistency qsl_consistency_check(const ModelParams& params, double tau) {
  QslConsistency c;
  c.specialized = qsl_correlated(params, tau, Convention::with_tau_factor);
  c.generic = qsl_unified(params, tau);
  const double scale = std::max(std::abs(c.specialized), std::abs(c.generic));
  c.rel_diff =
      (scale > 0.0) ? std::abs(c.specialized - c.generic) / scale : 0.0;
  c.consistent = c.rel_diff <= 1e-8;
  return c;
}

QslReport make_qsl_report(const ModelParams& params, double tau,
                          Convention convention) {
  QslReport rep;
  rep.tau = tau;
  rep.theta = relative_purity_angle(params, tau);
  rep.lambda_op = averaged_norm(params, tau, NormKind::operator_norm);
  rep.lambda_tr = averaged_norm(params, tau, NormKind::trace_norm);
  rep.lambda_hs = averaged_norm(params, tau, NormKind::hilbert_schmidt);
  rep.tau_ml = qsl_ml(params, tau);
  rep.tau_mt = qsl_mt(params, tau);
  rep.tau_unified = qsl_unified(params, tau);
  rep.tau_correlated = qsl_correlated(params, tau, convention);
  rep.coherence_initial = coherence_l1(params, 0.0);
  rep.convention = convention;
  return rep;
}

}  // namespace dephasim
