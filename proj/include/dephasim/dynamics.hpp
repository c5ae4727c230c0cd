#pragma once

// Exact reduced dynamics of the dephasing qubit. The environment enters only
// through the decoherence factor kappa(t); the populations are constants of
// motion and the coherence evolves as coh(t) = c_e conj(c_g) kappa(t).
// lambda interpolates between an uncorrelated initial state (lambda = 0) and
// a maximally correlated one (lambda = 1).

#include <Eigen/Dense>

#include "dephasim/model.hpp"

namespace dephasim {

// Overlap of the smeared environment packet with the displaced vacuum,
// o = exp(s(0)) = exp(-Gamma(v) omega_c^v / 2). Underflows to 0 for very
// small v, which downstream formulas tolerate.
double vacuum_overlap(const ModelParams& params);

// Normalization of the correlated initial environment state:
// eta = sqrt((1-lambda)^2 + lambda^2 + 2 lambda (1-lambda) o).
double eta(const ModelParams& params);

// Decoherence factor
//   kappa(t) = eta^{-1} e^{-2 i omega_0 t}
//              [ (1-lambda) e^{-r} + lambda e^{s-r} e^{-2 i phi} ].
// s - r <= 0 for all t, so the exponentials never overflow; |kappa| <= 1.
// At lambda = 0 the correlated branch is an exact zero, making the result
// bit-for-bit independent of v.
complex kappa(const ModelParams& params, double t);

// Time derivative of kappa, from the closed-form kernel derivatives.
complex kappa_dot(const ModelParams& params, double t);

// Reduced state at time t: populations |c_e|^2, |c_g|^2 frozen, coherence
// c_e conj(c_g) kappa(t).
QubitDensityMatrix reduced_state(const ModelParams& params, double t);

// d rho / dt as a 2x2 matrix: zero diagonal, off-diagonal
// c_e conj(c_g) kappa_dot(t) and its conjugate.
Eigen::Matrix2cd generator_value(const ModelParams& params, double t);

// l1 coherence monotone: 2 |coh(t)|.
double coherence_l1(const ModelParams& params, double t);

}  // namespace dephasim
