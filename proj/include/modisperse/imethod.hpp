#pragma once

#include <utility>

#include "modisperse/operator.hpp"
#include "modisperse/young.hpp"

namespace modisperse {

/// Low-pass smoothing multiplier: symbol m(xi) = 1 for |xi| < 1, |xi|^alpha
/// for |xi| >= 10, and a C^1 monotone cubic interpolation in log|xi| in
/// between. Applied as m_N(k) = m(k/N).
struct IMultiplier {
    double alpha = 0.0;  // <= 0
    double N = 1.0;      // >= 1

    IMultiplier(double alpha_, double N_);

    double m(double xi) const;
    double mN(double k) const { return m(k / N); }
};

/// Coefficient-wise multiplication by m_N(j/lambda).
TorusField apply_I(const IMultiplier& mult, const TorusField& f);

/// Hyperbolic rescaling: path w^lambda_t = lambda^3 w_{lambda^-3 t}
/// (resampled at the same resolution per unit rescaled time) and field
/// coefficients divided by lambda on the lambda-times-larger torus.
/// target_horizon (original time, <= path horizon) limits the rescaled
/// window; negative means the full horizon.
std::pair<ModulationPath, TorusField> rescale(const ModulationPath& path, const TorusField& field,
                                              double lambda, double target_horizon = -1.0);

/// || I X_{st}(psi1, psi2) - X_{st}(I psi1, I psi2) ||_{L^2} over the natural
/// output band (mKdV uses (psi1, psi2, psi2)).
double commutator_norm(const ModulatedOperator& op, const IMultiplier& mult, double s, double t,
                       const TorusField& psi1, const TorusField& psi2);

struct AlmostConservationConfig {
    double alpha = -0.25;
    double N = 16.0;
    double epsilon0 = 0.1;
    int K = 32;                  // mode cutoff of the base data and the solve
    int windows = 8;             // unit-length windows after rescaling
    double tol = 1e-8;
    double step_hint = 1.0 / 256.0;
    double gamma = 0.55;
    std::uint64_t path_seed = 1;
    std::uint64_t field_seed = 2;
    int samples_per_unit = 256;  // path samples per unit rescaled time
    double lambda_override = -1.0;  // > 0 skips the bisection for lambda
    bool zero_data = false;
};

struct WindowReport {
    double t0, t1;
    double energy0, energy1;  // ||I v|| at the window ends
    double commutator_term;   // accumulated first-order commutator pairing
    double remainder;         // energy increment minus the first-order term
};

struct AlmostConservationReport {
    double alpha = 0.0;
    double N = 0.0;
    double lambda = 0.0;
    double epsilon0 = 0.0;
    std::vector<WindowReport> windows;
    LinearFit slope_fit;  // modified energy vs window end time
    bool success = true;
    int failure_window = -1;  // first window whose energy reached 2 epsilon0
};

/// Global-existence driver: rescale so that ||I phi^lambda||_{L^2} = epsilon0,
/// solve unit windows on the lambda-torus, and track the modified energy
/// ||I v_t|| together with the per-window commutator term.
AlmostConservationReport almost_conservation_run(const AlmostConservationConfig& cfg);

}  // namespace modisperse
