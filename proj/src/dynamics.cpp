#include "dephasim/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "dephasim/kernels.hpp"
#include "dephasim/special_functions.hpp"

namespace dephasim {

// ---- parameter and state validation ----

void ModelParams::validate() const {
  const auto fail = [](const std::string& msg) {
    throw std::invalid_argument("ModelParams: " + msg);
  };
  if (!std::isfinite(alpha) || alpha < 0.0) fail("alpha must be non-negative");
  if (!std::isfinite(mu) || mu <= 0.0) fail("mu must be positive");
  if (!std::isfinite(v) || v <= 0.0) fail("v must be positive");
  if (!std::isfinite(omega_c) || omega_c <= 0.0) fail("omega_c must be positive");
  if (!std::isfinite(omega_0) || omega_0 < 0.0) fail("omega_0 must be non-negative");
  if (!std::isfinite(lambda) || lambda < 0.0 || lambda > 1.0)
    fail("lambda must be in [0, 1]");
  const double n2 = std::norm(c_e) + std::norm(c_g);
  if (!std::isfinite(n2) || std::abs(n2 - 1.0) > 1e-12)
    fail("initial amplitudes must satisfy |c_e|^2 + |c_g|^2 = 1");
}

void QubitDensityMatrix::validate() const {
  const auto fail = [](const std::string& msg) {
    throw std::invalid_argument("QubitDensityMatrix: " + msg);
  };
  if (!std::isfinite(p_ee) || !std::isfinite(coh.real()) ||
      !std::isfinite(coh.imag()))
    fail("entries must be finite");
  if (p_ee < -1e-12 || p_ee > 1.0 + 1e-12) fail("population out of [0, 1]");
  if (min_eigenvalue() < -1e-12) fail("matrix must be positive semidefinite");
}

// ---- environment overlap and normalization ----

double vacuum_overlap(const ModelParams& params) {
  params.validate();
  return std::exp(-0.5 * gamma(params.v) * std::pow(params.omega_c, params.v));
}

double eta(const ModelParams& params) {
  const double o = vacuum_overlap(params);
  const double lam = params.lambda;
  const double one_m = 1.0 - lam;
  return std::sqrt(one_m * one_m + lam * lam + 2.0 * lam * one_m * o);
}

// ---- decoherence factor ----

namespace {

complex phase(double angle) { return std::polar(1.0, angle); }

}  // namespace

complex kappa(const ModelParams& params, double t) {
  const KernelValues kv = kernel_closed_form(params, t);
  const double lam = params.lambda;
  // Combined exponent s - r <= 0 keeps this branch overflow-free.
  const complex correlated =
      lam * std::exp(kv.s - kv.r) * phase(-2.0 * kv.phi);
  const complex bracket = (1.0 - lam) * std::exp(-kv.r) + correlated;
  return phase(-2.0 * params.omega_0 * t) * bracket / eta(params);
}

complex kappa_dot(const ModelParams& params, double t) {
  const KernelValues kv = kernel_closed_form(params, t);
  const double lam = params.lambda;
  const double w0 = params.omega_0;
  const complex term_free =
      (1.0 - lam) * std::exp(-kv.r) * complex(-kv.r_dot, -2.0 * w0);
  const complex term_corr =
      lam * std::exp(kv.s - kv.r) * phase(-2.0 * kv.phi) *
      complex(kv.s_dot - kv.r_dot, -2.0 * w0 - 2.0 * kv.phi_dot);
  return phase(-2.0 * w0 * t) * (term_free + term_corr) / eta(params);
}

// ---- reduced state and generator ----

QubitDensityMatrix reduced_state(const ModelParams& params, double t) {
  QubitDensityMatrix rho;
  rho.p_ee = std::norm(params.c_e);
  rho.coh = params.c_e * std::conj(params.c_g) * kappa(params, t);
  return rho;
}

Eigen::Matrix2cd generator_value(const ModelParams& params, double t) {
  const complex z = params.c_e * std::conj(params.c_g) * kappa_dot(params, t);
  Eigen::Matrix2cd m;
  m(0, 0) = complex(0.0, 0.0);
  m(0, 1) = z;
  m(1, 0) = std::conj(z);
  m(1, 1) = complex(0.0, 0.0);
  return m;
}

double coherence_l1(const ModelParams& params, double t) {
  return 2.0 * std::abs(params.c_e * std::conj(params.c_g) * kappa(params, t));
}

}  // namespace dephasim
