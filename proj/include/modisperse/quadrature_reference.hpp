#pragma once

#include "modisperse/field.hpp"
#include "modisperse/path.hpp"

namespace modisperse::quadref {

/// Reference evaluation of the bilinear increment
///   X_{st}(psi1, psi2) = int_s^t U_sigma^{-1} d/dx Pi( (U_sigma psi1)(U_sigma psi2) ) dsigma
/// by direct time quadrature: at each node the inputs are twisted modewise by
/// exp(-i (2 pi k)^3 w_sigma), synthesized on a physical grid, multiplied
/// pointwise, re-analyzed, differentiated, and untwisted. Composite
/// Gauss-Legendre panels are aligned to the path's breakpoints and subdivided
/// so the fastest phase advances at most phase_budget radians per panel.
/// Shares only the path's sampled values; no closed-form phase integrals.
TorusField x_kdv_reference(const ModulationPath& path, double lambda, int K, double s, double t,
                           const TorusField& psi1, const TorusField& psi2,
                           double phase_budget = 3.0);

/// Same scheme for the trilinear star-restricted increment: the product is
/// formed in frequency space per node so the restricted index set
/// (j_i != 0, j_i != j) is honored exactly.
TorusField x_mkdv_reference(const ModulationPath& path, double lambda, int K, double s, double t,
                            const TorusField& psi1, const TorusField& psi2,
                            const TorusField& psi3, double phase_budget = 3.0);

}  // namespace modisperse::quadref
