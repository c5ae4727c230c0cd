#pragma once

// Decoherence kernels of the dephasing model with an exponentially cut off
// power-law spectral density J(w) = alpha * w^mu * exp(-w/omega_c):
//
//   r(t)   = 4 alpha Int dw w^{mu-1} e^{-w/wc} (1 - cos wt)
//   s(t)   = 2 sqrt(alpha) Int dw w^{chi-1} e^{-w/wc} (1 - cos wt)
//            - (1/2) Int dw w^{v-1} e^{-w/wc},        chi = (mu + v)/2
//   phi(t) = sqrt(alpha) Int dw w^{chi-1} e^{-w/wc} sin wt
//
// evaluated either in closed form (Gamma-function expressions, exact for the
// exponential cutoff) or by adaptive quadrature on a truncated frequency
// axis. Both paths return the values and their time derivatives.

#include "dephasim/model.hpp"

namespace dephasim {

// Closed-form evaluation; exact at t = 0 (r = s' = phi = 0, s = s(0),
// phi' = sqrt(alpha) Gamma(chi+1) wc^{chi+1}). Throws std::domain_error for
// t < 0 or invalid params.
KernelValues kernel_closed_form(const ModelParams& params, double t);

// Adaptive-quadrature evaluation of the same six quantities, independent of
// the Gamma-function route (used to cross-validate it). Each integral is
// resolved to 1e-9 absolute tolerance or to the roundoff resolution of its
// panel sum, whichever is coarser (large-prefactor integrals reach ~1e-7);
// throws QuadratureError when the truncation bound or the panel budget
// cannot support that.
KernelValues kernel_quadrature(const ModelParams& params, double t);

}  // namespace dephasim
