#include "modisperse/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace modisperse {

namespace {

// Largest sample index q with g_times[q] <= t (left-constant extension).
std::size_t left_index(const std::vector<double>& g_times, double t) {
    auto it = std::upper_bound(g_times.begin(), g_times.end(), t);
    if (it == g_times.begin()) return 0;
    return static_cast<std::size_t>(it - g_times.begin()) - 1;
}

// Discrete C^0 + C^{1/2} distance between two equally-timed field sequences.
double c0_chalf_distance(const std::vector<double>& times, const std::vector<TorusField>& a,
                         const std::vector<TorusField>& b) {
    const std::size_t n = times.size();
    std::vector<TorusField> d;
    d.reserve(n);
    double c0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d.push_back(a[i] - b[i]);
        c0 = std::max(c0, l2_norm(d.back()));
    }
    double c_half = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dt = times[j] - times[i];
            if (dt <= 0.0) continue;
            c_half = std::max(c_half, l2_distance(d[j], d[i]) / std::sqrt(dt));
        }
    }
    return c0 + c_half;
}

}  // namespace

double SolutionTrace::c_half_seminorm() const {
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        for (std::size_t j = i + 1; j < times.size(); ++j) {
            const double dt = times[j] - times[i];
            if (dt <= 0.0) continue;
            best = std::max(best, l2_distance(states[j], states[i]) / std::sqrt(dt));
        }
    }
    return best;
}

double SolutionTrace::max_abs_drift() const {
    double best = 0.0;
    for (const auto& d : diag) best = std::max(best, std::abs(d.drift));
    return best;
}

TorusField young_integral(const IncrementFamily& X, const std::vector<double>& g_times,
                          const std::vector<TorusField>& g_vals, int depth,
                          std::vector<double>* certificates) {
    if (g_times.size() != g_vals.size() || g_times.size() < 2) {
        throw std::invalid_argument("young_integral: need >= 2 aligned samples of g");
    }
    if (!std::is_sorted(g_times.begin(), g_times.end())) {
        throw std::invalid_argument("young_integral: sample times must be increasing");
    }
    if (depth < 0) throw std::invalid_argument("young_integral: depth >= 0 required");
    const double a = g_times.front();
    const double b = g_times.back();
    if (!(a < b)) throw std::invalid_argument("young_integral: degenerate interval");

    auto riemann = [&](int d) {
        const std::size_t m = std::size_t(1) << d;
        TorusField sum = g_vals.front();  // placeholder torus; overwritten below
        bool have = false;
        for (std::size_t i = 0; i < m; ++i) {
            const double s = a + (b - a) * double(i) / double(m);
            const double t = a + (b - a) * double(i + 1) / double(m);
            const TorusField inc = X(s, t, g_vals[left_index(g_times, s)]);
            if (!have) {
                sum = inc;
                have = true;
            } else {
                sum += inc;
            }
        }
        return sum;
    };

    TorusField prev = riemann(0);
    if (depth == 0) return prev;
    int bad_streak = 0;
    double prev_cert = -1.0;
    for (int d = 1; d <= depth; ++d) {
        TorusField cur = riemann(d);
        const double cert = l2_distance(cur, prev);
        if (certificates) certificates->push_back(cert);
        if (prev_cert > 0.0) {
            const double ratio = cert / prev_cert;
            bad_streak = ratio > 1.0 ? bad_streak + 1 : 0;
            if (bad_streak >= 3) {
                throw NumericalError("young_integral: certificate ratio above 1 for 3 "
                                     "consecutive depths (no sewing convergence)");
            }
        }
        prev_cert = cert;
        prev = std::move(cur);
    }
    return prev;
}

TorusField euler_step(const IncrementFamily& X, const TorusField& psi, double s, double t) {
    if (!(s < t)) throw std::invalid_argument("euler_step: requires s < t");
    return psi + X(s, t, psi);
}

SolutionTrace picard_solve(const IncrementFamily& X, const TorusField& psi0, double t0,
                           double T_local, double tol, int max_iter, int depth, double gamma) {
    if (!(tol > 0.0)) throw std::invalid_argument("picard_solve: tol > 0 required");
    if (!(T_local > 0.0)) throw std::invalid_argument("picard_solve: T_local > 0 required");
    if (max_iter < 1 || depth < 0) {
        throw std::invalid_argument("picard_solve: max_iter >= 1 and depth >= 0 required");
    }
    const std::size_t m = std::size_t(1) << depth;
    std::vector<double> times(m + 1);
    for (std::size_t i = 0; i <= m; ++i) times[i] = t0 + T_local * double(i) / double(m);
    times[m] = t0 + T_local;

    std::vector<TorusField> cur(m + 1, psi0);
    std::vector<TorusField> next;
    next.reserve(m + 1);
    double prev_dist = -1.0;
    int iters = 0;
    bool converged = false;
    while (iters < max_iter) {
        ++iters;
        next.clear();
        next.push_back(psi0);
        for (std::size_t q = 0; q < m; ++q) {
            next.push_back(next.back() + X(times[q], times[q + 1], cur[q]));
        }
        const double dist = c0_chalf_distance(times, next, cur);
        std::swap(cur, next);
        if (dist < tol) {
            converged = true;
            break;
        }
        if (prev_dist > 0.0) {
            const double ratio = dist / prev_dist;
            if (ratio >= 1.0) throw NoContraction(ratio);
        }
        prev_dist = dist;
    }
    if (!converged) {
        throw NumericalError("picard_solve: no convergence within " + std::to_string(max_iter) +
                             " iterations");
    }

    SolutionTrace tr;
    tr.times = times;
    tr.states = cur;
    tr.gamma = gamma;
    tr.M = 1;
    const double e0 = l2_norm(psi0) * l2_norm(psi0);
    const double h = T_local / double(m);
    tr.diag.resize(m);
    for (std::size_t q = 0; q < m; ++q) {
        StepDiagnostics d;
        d.t = times[q + 1];
        d.l2 = l2_norm(cur[q + 1]);
        d.drift = d.l2 * d.l2 - e0;
        const TorusField pred = cur[q] + X(times[q], times[q + 1], cur[q]);
        d.remainder = l2_distance(cur[q + 1], pred);
        d.iters = iters;
        d.step = h;
        tr.diag[q] = d;
    }
    return tr;
}

SolutionTrace solve_global(const IncrementFamily& X, const TorusField& psi0, double T, double tol,
                           double step_hint, double gamma) {
    if (!(T > 0.0)) throw std::invalid_argument("solve_global: T > 0 required");
    if (!(step_hint > 0.0)) throw std::invalid_argument("solve_global: step_hint > 0 required");

    SolutionTrace tr;
    tr.times.push_back(0.0);
    tr.states.push_back(psi0);
    tr.gamma = gamma;
    tr.M = 1;
    const double e0 = l2_norm(psi0) * l2_norm(psi0);

    // Initial window from the empirical operator size over one hinted step,
    // T_local ~ c (||X|| (1 + ||psi0||))^{-1/(gamma-1/2)} with c = 1/4.
    double window = std::min(T, 1.0);
    {
        const double delta = std::min(T, step_hint);
        const double xn = l2_norm(X(0.0, delta, psi0)) / std::pow(delta, gamma);
        if (xn > 0.0) {
            const double base = xn * (1.0 + l2_norm(psi0));
            const double guess = 0.25 * std::pow(base, -1.0 / (gamma - 0.5));
            window = std::clamp(guess, step_hint, std::min(T, 1.0));
        }
    }
    const double window_floor = std::ldexp(T, -20);

    double t_cur = 0.0;
    TorusField psi_cur = psi0;
    while (T - t_cur > 1e-12 * std::max(1.0, T)) {
        const double w = std::min(window, T - t_cur);
        int depth = 0;
        while ((std::size_t(1) << depth) * step_hint < w && depth < 12) ++depth;
        try {
            SolutionTrace local = picard_solve(X, psi_cur, t_cur, w, tol, 60, depth, gamma);
            for (std::size_t i = 1; i < local.times.size(); ++i) {
                tr.times.push_back(local.times[i]);
                tr.states.push_back(local.states[i]);
                StepDiagnostics d = local.diag[i - 1];
                d.drift = d.l2 * d.l2 - e0;  // drift against the global initial data
                tr.diag.push_back(d);
            }
            t_cur = tr.times.back();
            psi_cur = tr.states.back();
            window = std::min(window * 2.0, 1.0);
        } catch (const NoContraction&) {
            window = w / 2.0;
            if (window < window_floor) {
                throw NumericalError("solve_global: window shrank below 2^-20 T without "
                                     "contraction");
            }
        }
    }
    return tr;
}

namespace {

// Fixed partition solve: n_seg Picard windows of equal length, each on a
// dyadic grid with 2^depth steps, so every run shares the same time grid.
SolutionTrace solve_fixed_windows(const IncrementFamily& X, const TorusField& psi0, double T,
                                  int n_seg, int depth, double tol, double gamma) {
    SolutionTrace tr;
    tr.times.push_back(0.0);
    tr.states.push_back(psi0);
    tr.gamma = gamma;
    tr.M = 1;
    const double e0 = l2_norm(psi0) * l2_norm(psi0);
    TorusField psi_cur = psi0;
    for (int seg = 0; seg < n_seg; ++seg) {
        const double t0 = T * double(seg) / double(n_seg);
        const double t1 = T * double(seg + 1) / double(n_seg);
        SolutionTrace local = picard_solve(X, psi_cur, t0, t1 - t0, tol, 60, depth, gamma);
        for (std::size_t i = 1; i < local.times.size(); ++i) {
            tr.times.push_back(local.times[i]);
            tr.states.push_back(local.states[i]);
            StepDiagnostics d = local.diag[i - 1];
            d.drift = d.l2 * d.l2 - e0;
            tr.diag.push_back(d);
        }
        psi_cur = tr.states.back();
    }
    return tr;
}

}  // namespace

std::vector<GalerkinRow> galerkin_convergence_study(const ModulatedOperator& op,
                                                    const TorusField& psi0, double T,
                                                    const std::vector<double>& l_list,
                                                    double tol, double step_hint, double gamma) {
    if (l_list.size() < 2) {
        throw std::invalid_argument("galerkin study: need >= 2 truncation levels");
    }
    if (!std::is_sorted(l_list.begin(), l_list.end())) {
        throw std::invalid_argument("galerkin study: l_list must be increasing");
    }
    if (!(T > 0.0)) throw std::invalid_argument("galerkin study: T > 0 required");

    int total_depth = 0;
    while ((std::size_t(1) << total_depth) * step_hint < T && total_depth < 14) ++total_depth;
    const int seg_depth = std::min(total_depth, 6);
    const int n_seg = 1 << (total_depth - seg_depth);

    auto run = [&](double L) {
        IncrementFamily fam = [&op, L](double s, double t, const TorusField& g) {
            return op.x_truncated(L, s, t, g, op.cutoff());
        };
        return solve_fixed_windows(fam, psi0, T, n_seg, seg_depth, tol, gamma);
    };

    const SolutionTrace ref = run(l_list.back());
    std::vector<GalerkinRow> rows;
    for (std::size_t q = 0; q + 1 < l_list.size(); ++q) {
        const SolutionTrace trL = run(l_list[q]);
        if (trL.times.size() != ref.times.size()) {
            throw NumericalError("galerkin study: trace grids diverged across levels");
        }
        GalerkinRow row;
        row.L = l_list[q];
        row.gap_c0 = 0.0;
        std::vector<TorusField> diff;
        diff.reserve(ref.times.size());
        for (std::size_t i = 0; i < ref.times.size(); ++i) {
            diff.push_back(trL.states[i] - ref.states[i]);
            row.gap_c0 = std::max(row.gap_c0, l2_norm(diff.back()));
        }
        double c_half = 0.0;
        for (std::size_t i = 0; i + 1 < diff.size(); ++i) {
            for (std::size_t j = i + 1; j < diff.size(); ++j) {
                const double dt = ref.times[j] - ref.times[i];
                if (dt <= 0.0) continue;
                c_half = std::max(c_half, l2_distance(diff[j], diff[i]) / std::sqrt(dt));
            }
        }
        row.gap_c_half = row.gap_c0 + c_half;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace modisperse
