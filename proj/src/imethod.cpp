#include "modisperse/imethod.hpp"

#include <algorithm>
#include <cmath>

namespace modisperse {

IMultiplier::IMultiplier(double alpha_, double N_) : alpha(alpha_), N(N_) {
    if (alpha > 0.0) throw std::invalid_argument("IMultiplier: alpha <= 0 required");
    if (!(N >= 1.0)) throw std::invalid_argument("IMultiplier: N >= 1 required");
}

double IMultiplier::m(double xi) const {
    const double x = std::abs(xi);
    if (x < 1.0) return 1.0;
    if (x >= 10.0) return std::pow(x, alpha);
    // log m interpolates 0 -> alpha log 10 by a cubic smoothstep in log10 x.
    const double u = std::log10(x);
    const double s = u * u * (3.0 - 2.0 * u);
    return std::pow(10.0, alpha * s);
}

TorusField apply_I(const IMultiplier& mult, const TorusField& f) {
    TorusField out = f;
    for (int j = -f.cutoff(); j <= f.cutoff(); ++j) {
        if (j == 0) continue;
        out.set_coeff(j, mult.mN(j / f.lambda()) * f.coeff(j));
    }
    return out;
}

std::pair<ModulationPath, TorusField> rescale(const ModulationPath& path, const TorusField& field,
                                              double lambda, double target_horizon) {
    if (!(lambda >= 1.0)) throw std::invalid_argument("rescale: lambda >= 1 required");
    const double T0 = target_horizon > 0.0 ? target_horizon : path.horizon();
    if (T0 > path.horizon() * (1.0 + 1e-12)) {
        throw std::invalid_argument("rescale: target horizon exceeds the path horizon");
    }
    const double l3 = lambda * lambda * lambda;
    const double new_horizon = l3 * T0;
    // Keep the samples-per-unit-time density of the source grid.
    const double density = path.segments() / path.horizon();
    const int n_new = std::max(1, static_cast<int>(std::llround(density * new_horizon)));
    std::vector<double> samples(static_cast<std::size_t>(n_new) + 1);
    for (int i = 0; i <= n_new; ++i) {
        const double t_new = new_horizon * double(i) / double(n_new);
        samples[static_cast<std::size_t>(i)] = l3 * path.value(t_new / l3);
    }
    ModulationPath new_path(new_horizon, std::move(samples), path.kind(), path.kind_param());

    TorusField new_field(field.lambda() * lambda, field.cutoff(), field.real_flag());
    for (int j = -field.cutoff(); j <= field.cutoff(); ++j) {
        if (j == 0) continue;
        new_field.set_coeff(j, field.coeff(j) / lambda);
    }
    return {std::move(new_path), std::move(new_field)};
}

double commutator_norm(const ModulatedOperator& op, const IMultiplier& mult, double s, double t,
                       const TorusField& psi1, const TorusField& psi2) {
    TorusField full = op.equation() == Equation::kdv ? op.x_kdv(s, t, psi1, psi2)
                                                     : op.x_mkdv(s, t, psi1, psi2, psi2);
    TorusField twisted = op.equation() == Equation::kdv
                             ? op.x_kdv(s, t, apply_I(mult, psi1), apply_I(mult, psi2))
                             : op.x_mkdv(s, t, apply_I(mult, psi1), apply_I(mult, psi2),
                                         apply_I(mult, psi2));
    return l2_distance(apply_I(mult, full), twisted);
}

namespace {

// solve_global with a nonzero start time: chains Picard windows over [t0, t1]
// with bisection on no-contraction, identical mechanics to solve_global.
SolutionTrace solve_interval(const IncrementFamily& X, const TorusField& psi0, double t0,
                             double t1, double tol, double step_hint, double gamma) {
    const double T = t1 - t0;
    SolutionTrace tr;
    tr.times.push_back(t0);
    tr.states.push_back(psi0);
    tr.gamma = gamma;
    tr.M = 1;
    const double e0 = l2_norm(psi0) * l2_norm(psi0);
    const double window_floor = std::ldexp(T, -20);
    double window = std::min(T, 1.0);
    double t_cur = t0;
    TorusField psi_cur = psi0;
    while (t1 - t_cur > 1e-12 * std::max(1.0, t1)) {
        const double w = std::min(window, t1 - t_cur);
        int depth = 0;
        while ((std::size_t(1) << depth) * step_hint < w && depth < 12) ++depth;
        try {
            SolutionTrace local = picard_solve(X, psi_cur, t_cur, w, tol, 60, depth, gamma);
            for (std::size_t i = 1; i < local.times.size(); ++i) {
                tr.times.push_back(local.times[i]);
                tr.states.push_back(local.states[i]);
                StepDiagnostics d = local.diag[i - 1];
                d.drift = d.l2 * d.l2 - e0;
                tr.diag.push_back(d);
            }
            t_cur = tr.times.back();
            psi_cur = tr.states.back();
            window = std::min(window * 2.0, 1.0);
        } catch (const NoContraction&) {
            window = w / 2.0;
            if (window < window_floor) {
                throw NumericalError("solve_interval: window shrank below 2^-20 T without "
                                     "contraction");
            }
        }
    }
    return tr;
}

}  // namespace

AlmostConservationReport almost_conservation_run(const AlmostConservationConfig& cfg) {
    if (!(cfg.epsilon0 > 0.0)) throw std::invalid_argument("epsilon0 > 0 required");
    if (cfg.windows < 1) throw std::invalid_argument("need >= 1 window");
    if (!(cfg.N >= 1.0)) throw std::invalid_argument("N >= 1 required");

    TorusField phi = random_field(1.0, cfg.K, cfg.alpha, cfg.field_seed, true);
    if (cfg.zero_data) phi *= 0.0;
    const IMultiplier mult(cfg.alpha, cfg.N);

    // Choose lambda so that ||I phi^lambda||_{L^2} = epsilon0 (monotone
    // decreasing in lambda), unless overridden.
    auto rescaled_energy = [&](double lambda) {
        TorusField f(lambda, cfg.K, phi.real_flag());
        for (int j = -cfg.K; j <= cfg.K; ++j) {
            if (j == 0) continue;
            f.set_coeff(j, phi.coeff(j) / lambda);
        }
        return l2_norm(apply_I(mult, f));
    };
    double lambda = cfg.lambda_override;
    if (lambda <= 0.0) {
        if (cfg.zero_data) {
            lambda = 1.0;
        } else if (rescaled_energy(1.0) <= cfg.epsilon0) {
            lambda = 1.0;
        } else {
            double lo = 1.0, hi = 2.0;
            while (rescaled_energy(hi) > cfg.epsilon0) {
                lo = hi;
                hi *= 2.0;
                if (hi > 1e9) throw NumericalError("lambda bisection failed to bracket");
            }
            for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (rescaled_energy(mid) > cfg.epsilon0 ? lo : hi) = mid;
            }
            lambda = 0.5 * (lo + hi);
        }
    }

    // Base path on horizon windows / lambda^3 so the rescaled grid matches
    // the base grid sample-for-sample.
    const double l3 = lambda * lambda * lambda;
    const double horizon_resc = double(cfg.windows);
    const int n_samples = cfg.windows * cfg.samples_per_unit;
    ModulationPath base = sample_brownian(n_samples, horizon_resc / l3, cfg.path_seed);
    auto [path_l, v0] = rescale(base, phi, lambda);

    auto op = std::make_shared<ModulatedOperator>(
        Equation::kdv, std::make_shared<ModulationPath>(std::move(path_l)), v0.lambda(), cfg.K);
    IncrementFamily fam = [op](double s, double t, const TorusField& g) {
        return op->x_quadratic(s, t, g, op->cutoff());
    };

    AlmostConservationReport rep;
    rep.alpha = cfg.alpha;
    rep.N = cfg.N;
    rep.lambda = lambda;
    rep.epsilon0 = cfg.epsilon0;

    TorusField v_cur = v0;
    std::vector<double> fit_t, fit_e;
    for (int w = 0; w < cfg.windows; ++w) {
        const double t0 = double(w);
        const double t1 = double(w + 1);
        SolutionTrace tr =
            solve_interval(fam, v_cur, t0, t1, cfg.tol, cfg.step_hint, cfg.gamma);
        WindowReport wr;
        wr.t0 = t0;
        wr.t1 = t1;
        wr.energy0 = l2_norm(apply_I(mult, tr.states.front()));
        wr.energy1 = l2_norm(apply_I(mult, tr.states.back()));
        // First-order commutator accumulation along the trace:
        //   ||I v_{t+h}||^2 - ||I v_t||^2
        //     = 2 Re< I v_t, I X(v,v) - X(I v, I v) > + O(h^{2 gamma}).
        double comm = 0.0, rem = 0.0;
        for (std::size_t i = 0; i + 1 < tr.times.size(); ++i) {
            const double a = tr.times[i], b = tr.times[i + 1];
            const TorusField iv = apply_I(mult, tr.states[i]);
            const TorusField ivn = apply_I(mult, tr.states[i + 1]);
            const TorusField x_full = op->x_quadratic(a, b, tr.states[i], op->cutoff());
            const TorusField x_i = op->x_quadratic(a, b, iv, op->cutoff());
            const TorusField comm_field = apply_I(mult, x_full) - x_i;
            const double term = 2.0 * inner_product(iv, comm_field).real();
            const double inc = l2_norm(ivn) * l2_norm(ivn) - l2_norm(iv) * l2_norm(iv);
            comm += term;
            rem += inc - term;
        }
        wr.commutator_term = comm;
        wr.remainder = rem;
        rep.windows.push_back(wr);
        fit_t.push_back(t1);
        fit_e.push_back(wr.energy1);
        if (rep.success && wr.energy1 >= 2.0 * cfg.epsilon0) {
            rep.success = false;
            rep.failure_window = w;
        }
        v_cur = tr.states.back();
    }
    if (fit_t.size() >= 2) {
        rep.slope_fit = least_squares(fit_t, fit_e);
    }
    return rep;
}

}  // namespace modisperse
