#pragma once

// Trace-distance distinguishability and the information-backflow measure.
// For pure dephasing the optimally distinguishable initial pair is the
// balanced antipodal pair on the coherence axis; its distance decays as
// exp(-exponent * r(t)) with the dephasing exponent r(t). The backflow
// measure N accumulates the distance regained over every interval where the
// distance grows (equivalently, where r decreases).

#include <utility>
#include <vector>

#include "dephasim/model.hpp"

namespace dephasim {

// Trace distance of two qubit states: sqrt(dp^2 + |dcoh|^2) for the
// Hermitian difference with population gap dp and coherence gap dcoh.
double trace_distance(const QubitDensityMatrix& a, const QubitDensityMatrix& b);

// Distance of the optimal antipodal pair at time t: exp(-exponent * r(t)).
// exponent 2 is the printed convention; 1 is the modulus convention.
double optimal_pair_distance(const ModelParams& params, double t,
                             int exponent = 2);

// Time derivative of the optimal-pair distance:
// sigma = -exponent * r_dot * exp(-exponent * r). Positive sigma is backflow.
double sigma(const ModelParams& params, double t, int exponent = 2);

struct NonMarkovReport {
  double n_value = 0.0;
  // Maximal intervals of growing distance (sigma > 0), clipped to the
  // covered horizon; each contributes distance(end) - distance(begin).
  std::vector<std::pair<double, double>> intervals;
  double horizon = 0.0;  // horizon actually covered after doubling
  int exponent = 2;
  bool converged = true;
};

// Backflow measure over [0, horizon]. The sign of sigma is scanned on a
// dense grid (step <= min(0.01/omega_c, horizon/1e4)), each sign change is
// bisected to |dt| < 1e-10, and the horizon is doubled (at most 4 times)
// until an additional doubling changes N by less than tol; `converged`
// records whether that happened.
NonMarkovReport non_markovianity(const ModelParams& params, double horizon,
                                 int exponent = 2, double tol = 1e-6);

// Backflow accumulated on [0, tau] only (no horizon doubling); a trailing
// growth interval open at tau contributes up to tau, so the result is
// continuous and non-decreasing in tau.
double non_markovianity_partial(const ModelParams& params, double tau,
                                int exponent = 2);

}  // namespace dephasim
