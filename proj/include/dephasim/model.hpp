#pragma once

// Core value types for the dephasing-qubit model: parameter set, kernel
// bundle, and the 2x2 reduced density matrix in (population, coherence) form.

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dephasim {

using complex = std::complex<double>;

inline constexpr double inv_sqrt2 = 0.70710678118654752440;

// Thrown when an adaptive quadrature cannot reach its tolerance within the
// panel budget, or when a convergence loop (e.g. horizon doubling) fails.
class QuadratureError : public std::runtime_error {
 public:
  explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

// Full parameter set of the model. Spectral density J(w) = a * w^mu *
// exp(-w/omega_c) (mu is the Ohmicity), environment-correlation strength
// lambda in [0,1], vacuum-smearing width exponent v > 0, qubit level
// splitting 2*omega_0, and the initial qubit amplitudes c_e, c_g.
struct ModelParams {
  double alpha = 0.01;     // coupling strength a
  double mu = 5.0;         // Ohmicity exponent
  double v = 0.01;         // smearing exponent of the correlated-state packet
  double omega_c = 1.0;    // spectral cutoff
  double omega_0 = 1.0;    // half the qubit level splitting
  double lambda = 0.0;     // initial system-environment correlation weight
  complex c_e{inv_sqrt2, 0.0};  // excited-state amplitude
  complex c_g{inv_sqrt2, 0.0};  // ground-state amplitude

  double chi() const { return 0.5 * (mu + v); }

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// r, s, phi and their time derivatives at one instant.
struct KernelValues {
  double t = 0.0;
  double r = 0.0;
  double s = 0.0;
  double phi = 0.0;
  double r_dot = 0.0;
  double s_dot = 0.0;
  double phi_dot = 0.0;
};

// Reduced qubit state: rho = [[p_ee, coh], [conj(coh), 1-p_ee]].
struct QubitDensityMatrix {
  double p_ee = 0.0;
  complex coh{0.0, 0.0};

  Eigen::Matrix2cd to_matrix() const {
    Eigen::Matrix2cd m;
    m(0, 0) = complex(p_ee, 0.0);
    m(0, 1) = coh;
    m(1, 0) = std::conj(coh);
    m(1, 1) = complex(1.0 - p_ee, 0.0);
    return m;
  }

  double min_eigenvalue() const {
    const double mid = 0.5;
    const double half = p_ee - 0.5;
    const double disc = std::sqrt(half * half + std::norm(coh));
    return mid - disc;
  }

  // Throws std::invalid_argument if not a valid state (trace handled by
  // construction; checks positivity up to a small tolerance).
  void validate() const;
};

}  // namespace dephasim
