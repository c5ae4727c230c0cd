#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include "dephasim/dynamics.hpp"
#include "dephasim/kernels.hpp"

using dephasim::complex;
using dephasim::coherence_l1;
using dephasim::eta;
using dephasim::generator_value;
using dephasim::kappa;
using dephasim::kappa_dot;
using dephasim::kernel_closed_form;
using dephasim::ModelParams;
using dephasim::QubitDensityMatrix;
using dephasim::reduced_state;
using dephasim::vacuum_overlap;

namespace {

struct uniform_stream {
  std::mt19937_64 rng;
  explicit uniform_stream(std::uint64_t seed) : rng(seed) {}
  double next() { return (rng() >> 11) * 0x1.0p-53; }
  double in(double lo, double hi) { return lo + (hi - lo) * next(); }
};

template <typename Fn>
bool throws_invalid_mentioning(Fn&& fn, const std::string& needle) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  } catch (...) {
    return false;
  }
  return false;
}

}  // namespace

// ---- environment overlap and normalization ----

TEST_CASE("vacuum overlap for a narrow packet") {
  const ModelParams p;  // v = 0.01, omega_c = 1
  CHECK(vacuum_overlap(p) ==
        doctest::Approx(2.561465322382854e-22).epsilon(1e-10));
}

TEST_CASE("eta at the interpolation endpoints and midpoint") {
  ModelParams p;
  p.lambda = 0.0;
  CHECK(eta(p) == 1.0);
  p.lambda = 1.0;
  CHECK(eta(p) == 1.0);
  p.lambda = 0.5;  // overlap ~ 1e-22 is invisible at double precision
  CHECK(eta(p) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
}

// ---- decoherence factor ----

TEST_CASE("kappa for the uncorrelated state") {
  ModelParams p;
  p.lambda = 0.0;
  const complex k0 = kappa(p, 0.0);
  CHECK(k0.real() == 1.0);
  CHECK(k0.imag() == 0.0);
  // |kappa| = exp(-r) when lambda = 0.
  const double r1 = kernel_closed_form(p, 1.0).r;
  CHECK(std::abs(kappa(p, 1.0)) == doctest::Approx(std::exp(-r1)).epsilon(1e-12));
}

TEST_CASE("kappa for a partially correlated state") {
  ModelParams p;
  p.lambda = 0.25;
  CHECK(std::abs(kappa(p, 0.0)) ==
        doctest::Approx(0.9486832980505138).epsilon(1e-12));
  CHECK(std::abs(kappa(p, 1.0)) ==
        doctest::Approx(0.3221686032720387).epsilon(1e-10));
}

TEST_CASE("kappa stays inside the unit disk") {
  uniform_stream u(7);
  for (int i = 0; i < 40; ++i) {
    ModelParams p;
    p.alpha = u.in(0.0, 0.2);
    p.mu = u.in(1.0, 8.0);
    p.v = u.in(0.01, 2.0);
    p.omega_c = u.in(0.5, 2.0);
    p.omega_0 = u.in(0.0, 2.0);
    p.lambda = u.in(0.0, 1.0);
    CHECK(std::abs(kappa(p, u.in(0.0, 20.0))) <= 1.0 + 1e-12);
  }
}

TEST_CASE("kappa at lambda = 0 is independent of the packet width") {
  ModelParams a;
  a.lambda = 0.0;
  a.v = 0.01;
  ModelParams b = a;
  b.v = 1.7;
  for (double t : {0.0, 0.4, 1.3, 5.0}) {
    CHECK(kappa(a, t) == kappa(b, t));  // bitwise
    CHECK(kappa_dot(a, t) == kappa_dot(b, t));
  }
}

// ---- kappa derivative ----

TEST_CASE("kappa_dot closed forms at simple points") {
  ModelParams p;
  p.lambda = 0.0;
  // t = 0: r'(0) = 0, so kappa_dot = -2 i omega_0.
  const complex kd0 = kappa_dot(p, 0.0);
  CHECK(kd0.real() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(kd0.imag() == doctest::Approx(-2.0 * p.omega_0).epsilon(1e-14));
  // omega_0 = 0: kappa_dot = -r' exp(-r), purely real.
  ModelParams q = p;
  q.omega_0 = 0.0;
  const auto k = kernel_closed_form(q, 0.8);
  const complex kd = kappa_dot(q, 0.8);
  CHECK(kd.real() ==
        doctest::Approx(-k.r_dot * std::exp(-k.r)).epsilon(1e-12));
  CHECK(kd.imag() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("kappa_dot matches finite differences of kappa") {
  uniform_stream u(13);
  for (int i = 0; i < 10; ++i) {
    ModelParams p;
    p.alpha = u.in(0.001, 0.2);
    p.mu = u.in(1.0, 8.0);
    p.v = u.in(0.01, 2.0);
    p.omega_c = u.in(0.5, 2.0);
    p.omega_0 = u.in(0.5, 2.0);
    p.lambda = u.in(0.0, 0.9);
    const double t = u.in(0.1, 6.0);
    const double h = 1e-5 * std::max(1.0, t);
    const complex fd = (kappa(p, t + h) - kappa(p, t - h)) / (2.0 * h);
    const complex an = kappa_dot(p, t);
    CHECK(std::abs(fd - an) <= 1e-5 * std::abs(an));
  }
}

// ---- reduced state and generator ----

TEST_CASE("reduced state examples") {
  ModelParams excited;
  excited.c_e = complex(1.0, 0.0);
  excited.c_g = complex(0.0, 0.0);
  const QubitDensityMatrix rho1 = reduced_state(excited, 3.0);
  CHECK(rho1.p_ee == 1.0);
  CHECK(std::abs(rho1.coh) == 0.0);

  ModelParams balanced;  // lambda = 0
  const QubitDensityMatrix rho2 = reduced_state(balanced, 0.0);
  CHECK(rho2.p_ee == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rho2.coh.real() == doctest::Approx(0.5).epsilon(1e-14));

  ModelParams corr;
  corr.lambda = 0.25;
  CHECK(std::abs(reduced_state(corr, 0.0).coh) ==
        doctest::Approx(0.4743416490252569).epsilon(1e-12));
}

TEST_CASE("reduced states are physical") {
  uniform_stream u(31);
  for (int i = 0; i < 30; ++i) {
    ModelParams p;
    p.alpha = u.in(0.0, 0.2);
    p.mu = u.in(1.0, 8.0);
    p.v = u.in(0.01, 2.0);
    p.omega_c = u.in(0.5, 2.0);
    p.omega_0 = u.in(0.0, 2.0);
    p.lambda = u.in(0.0, 1.0);
    const QubitDensityMatrix rho = reduced_state(p, u.in(0.0, 15.0));
    CHECK_NOTHROW(rho.validate());
    CHECK(rho.min_eigenvalue() >= -1e-12);
    CHECK(rho.to_matrix().trace().real() == 1.0);
  }
}

TEST_CASE("generator has zero diagonal and matches state differences") {
  ModelParams p;
  p.lambda = 0.25;
  const double t = 0.9;
  const Eigen::Matrix2cd g = generator_value(p, t);
  CHECK(std::abs(g(0, 0)) == 0.0);
  CHECK(std::abs(g(1, 1)) == 0.0);
  const double h = 1e-5;
  const Eigen::Matrix2cd fd =
      (reduced_state(p, t + h).to_matrix() - reduced_state(p, t - h).to_matrix()) /
      (2.0 * h);
  CHECK(std::abs(g(0, 1) - fd(0, 1)) < 1e-6);
  CHECK(std::abs(g(1, 0) - fd(1, 0)) < 1e-6);
}

// ---- initial coherence ----

TEST_CASE("initial coherence across the correlation range") {
  ModelParams p;
  p.lambda = 0.0;
  CHECK(coherence_l1(p, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  p.lambda = 0.5;
  CHECK(coherence_l1(p, 0.0) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  p.lambda = 1.0;
  CHECK(coherence_l1(p, 0.0) < 1e-10);

  // Strictly decreasing on an 11-point lambda grid (v = 0.01).
  double prev = 2.0;
  for (int i = 0; i <= 10; ++i) {
    p.lambda = 0.1 * i;
    const double c = coherence_l1(p, 0.0);
    CHECK(c < prev);
    prev = c;
  }
}

// ---- parameter validation ----

TEST_CASE("parameter validation names the offending field") {
  auto with = [](auto&& mutate) {
    return [mutate]() {
      ModelParams p;
      mutate(p);
      p.validate();
    };
  };
  CHECK(throws_invalid_mentioning(with([](ModelParams& p) { p.alpha = -0.1; }),
                                  "alpha"));
  CHECK(throws_invalid_mentioning(with([](ModelParams& p) { p.mu = 0.0; }),
                                  "mu"));
  CHECK(throws_invalid_mentioning(with([](ModelParams& p) { p.v = -1.0; }),
                                  "v"));
  CHECK(throws_invalid_mentioning(with([](ModelParams& p) { p.omega_c = 0.0; }),
                                  "omega_c"));
  CHECK(throws_invalid_mentioning(
      with([](ModelParams& p) { p.omega_0 = -0.5; }), "omega_0"));
  CHECK(throws_invalid_mentioning(
      with([](ModelParams& p) { p.lambda = 1.5; }), "lambda"));
  CHECK(throws_invalid_mentioning(
      with([](ModelParams& p) { p.c_e = complex(1.0, 0.0); }), "c_"));
}
