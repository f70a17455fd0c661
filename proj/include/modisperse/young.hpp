#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "modisperse/operator.hpp"

namespace modisperse {

/// State-dependent two-parameter increment family (s,t,g) -> X_{st}(g).
using IncrementFamily = std::function<TorusField(double, double, const TorusField&)>;

struct StepDiagnostics {
    double t = 0.0;         // right endpoint of the step
    double l2 = 0.0;        // ||psi_t||_{L^2}
    double drift = 0.0;     // ||psi_t||^2 - ||psi_0||^2 (reported, never corrected)
    double remainder = 0.0; // residual of the step relation after the final sweep
    int iters = 0;          // Picard iterations of the window this step belongs to
    double step = 0.0;
};

/// Time-stamped twisted states psi_{t_i} with per-step diagnostics.
struct SolutionTrace {
    std::vector<double> times;
    std::vector<TorusField> states;
    std::vector<StepDiagnostics> diag;  // one entry per step (times.size()-1)
    double gamma = 0.0;
    int M = 1;  // polynomial growth degree of the increment family

    /// Discrete C^{1/2} seminorm max_{i<j} ||psi_j - psi_i|| / (t_j - t_i)^{1/2}.
    double c_half_seminorm() const;
    double max_abs_drift() const;
};

/// Dyadic Riemann sum sum_i X_{t_i t_{i+1}}(g(t_i)) at refinement depth d over
/// [g_times.front(), g_times.back()], with left-constant extension of g
/// between its samples. Certificates ||S_d - S_{d-1}|| are appended when
/// requested; a certificate ratio > 1 over 3 consecutive depths raises
/// NumericalError.
TorusField young_integral(const IncrementFamily& X, const std::vector<double>& g_times,
                          const std::vector<TorusField>& g_vals, int depth,
                          std::vector<double>* certificates = nullptr);

/// One explicit step psi + X_{st}(psi); local error O(|t-s|^{gamma+1/2}).
TorusField euler_step(const IncrementFamily& X, const TorusField& psi, double s, double t);

struct NoContraction : NumericalError {
    double ratio;
    explicit NoContraction(double r)
        : NumericalError("picard_solve: no contraction, iterate ratio " + std::to_string(r)),
          ratio(r) {}
};

/// Picard fixed point of psi_t = psi_0 + int_0^t X_{ds}(psi_s) on the dyadic
/// grid of [t0, t0+T_local] with 2^depth steps. Iterates until the discrete
/// C^0 + C^{1/2} distance between successive iterates drops below tol; a
/// non-decreasing iterate distance raises NoContraction with the measured
/// ratio so callers can shrink T_local.
SolutionTrace picard_solve(const IncrementFamily& X, const TorusField& psi0, double t0,
                           double T_local, double tol, int max_iter, int depth,
                           double gamma = 0.55);

/// Conservation-based continuation: chains picard_solve windows to cover
/// [0, T], bisecting the window on no-contraction down to 2^-20 T. Step sizes
/// aim at step_hint. L^2 drift is reported in the diagnostics, not corrected.
SolutionTrace solve_global(const IncrementFamily& X, const TorusField& psi0, double T,
                           double tol, double step_hint, double gamma = 0.55);

struct GalerkinRow {
    double L;
    double gap_c0;      // max_t ||psi^L_t - psi^{L_max}_t||_{L^2}
    double gap_c_half;  // discrete C^{1/2} norm of the difference
};

/// Solve with the L-truncated operator for each L in l_list (plus the
/// reference L_max = l_list.back()) and report gaps to the reference run.
std::vector<GalerkinRow> galerkin_convergence_study(const ModulatedOperator& op,
                                                    const TorusField& psi0, double T,
                                                    const std::vector<double>& l_list,
                                                    double tol, double step_hint,
                                                    double gamma = 0.55);

}  // namespace modisperse
