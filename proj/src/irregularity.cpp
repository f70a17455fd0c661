#include "modisperse/irregularity.hpp"

#include <algorithm>
#include <cmath>

namespace modisperse {

PairGrid dyadic_pairs(double horizon, int depth, int max_per_scale) {
    if (depth < 0) throw std::invalid_argument("dyadic_pairs: depth >= 0");
    if (max_per_scale < 1) throw std::invalid_argument("dyadic_pairs: max_per_scale >= 1");
    PairGrid g;
    g.depth = depth;
    for (int j = 0; j <= depth; ++j) {
        const int m = 1 << j;
        const double h = horizon / m;
        // Cap the number of offsets per scale so the extreme-value bias of the
        // per-scale maximum stays uniform across scales.
        const int take = std::min(m, max_per_scale);
        for (int q = 0; q < take; ++q) {
            const int i = static_cast<int>((static_cast<long long>(q) * m) / take);
            g.pairs.emplace_back(i * h, (i + 1) * h);
        }
    }
    return g;
}

std::vector<double> geometric_grid(double a_min, double a_max, int points_per_decade) {
    if (!(a_min > 0.0 && a_max > a_min) || points_per_decade < 1) {
        throw std::invalid_argument("geometric_grid: bad range");
    }
    std::vector<double> g;
    const double step = std::pow(10.0, 1.0 / points_per_decade);
    for (double a = a_min; a <= a_max * (1.0 + 1e-12); a *= step) g.push_back(a);
    return g;
}

namespace {

// M(a) = sup over the pair grid of |Phi_{s,t}(a)| / (t-s)^gamma, and the
// attaining pair.
struct PairMax {
    double value = 0.0;
    double s = 0.0, t = 0.0;
};

PairMax pair_sup(const ModulationPath& path, double a, double gamma, const PairGrid& pairs) {
    PairMax best;
    for (const auto& [s, t] : pairs.pairs) {
        const double v = std::abs(path.phi(s, t, a)) / std::pow(t - s, gamma);
        if (v > best.value) best = {v, s, t};
    }
    return best;
}

void check_inputs(double gamma, const std::vector<double>& a_grid, const PairGrid& pairs) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in (0,1)");
    if (a_grid.empty()) throw std::invalid_argument("a_grid must be nonempty");
    for (const auto& [s, t] : pairs.pairs) {
        if (!(s < t)) throw std::invalid_argument("pair grid requires s < t");
    }
}

}  // namespace

IrregularityEstimate irregularity_seminorm(const ModulationPath& path, double rho, double gamma,
                                           const std::vector<double>& a_grid,
                                           const PairGrid& pairs, int threads) {
    if (rho < 0.0) throw std::invalid_argument("rho must be >= 0");
    check_inputs(gamma, a_grid, pairs);

    std::vector<PairMax> per_a(a_grid.size());
    parallel_for(a_grid.size(), threads, [&](std::size_t i) {
        per_a[i] = pair_sup(path, a_grid[i], gamma, pairs);
    });

    IrregularityEstimate est;
    est.gamma = gamma;
    est.rho_hat = rho;
    est.a_grid = a_grid;
    est.pair_grid = pairs;
    for (std::size_t i = 0; i < a_grid.size(); ++i) {
        const double bracket = std::sqrt(1.0 + a_grid[i] * a_grid[i]);
        const double v = std::pow(bracket, rho) * per_a[i].value;
        if (v > est.seminorm) {
            est.seminorm = v;
            est.argmax_a = a_grid[i];
            est.argmax_s = per_a[i].s;
            est.argmax_t = per_a[i].t;
        }
    }
    return est;
}

IrregularityEstimate estimate_rho(const ModulationPath& path, double gamma,
                                  const std::vector<double>& a_grid, const PairGrid& pairs,
                                  int threads) {
    check_inputs(gamma, a_grid, pairs);

    // Group the pair grid by interval length (one group per dyadic scale).
    std::vector<std::vector<std::size_t>> groups;
    {
        std::vector<std::pair<double, std::size_t>> keyed;
        for (std::size_t i = 0; i < pairs.pairs.size(); ++i) {
            keyed.emplace_back(pairs.pairs[i].second - pairs.pairs[i].first, i);
        }
        std::sort(keyed.begin(), keyed.end());
        for (std::size_t i = 0; i < keyed.size(); ++i) {
            if (i == 0 || keyed[i].first > keyed[i - 1].first * (1.0 + 1e-9)) {
                groups.emplace_back();
            }
            groups.back().push_back(keyed[i].second);
        }
    }

    std::vector<PairMax> per_a(a_grid.size());
    parallel_for(a_grid.size(), threads, [&](std::size_t i) {
        const double a = a_grid[i];
        PairMax best;
        std::vector<double> mags;
        for (const auto& group : groups) {
            mags.clear();
            for (std::size_t q : group) {
                const auto& [s, t] = pairs.pairs[q];
                mags.push_back(std::abs(path.phi(s, t, a)));
            }
            std::vector<double> sorted = mags;
            const std::size_t mid = sorted.size() / 2;
            std::nth_element(sorted.begin(), sorted.begin() + mid, sorted.end());
            const double med = sorted[mid];
            // representative pair: the first one attaining >= the median
            std::size_t rep = group.front();
            for (std::size_t k = 0; k < group.size(); ++k) {
                if (mags[k] >= med) {
                    rep = group[k];
                    break;
                }
            }
            const auto& [s, t] = pairs.pairs[rep];
            const double v = med / std::pow(t - s, gamma);
            if (v > best.value) best = {v, s, t};
        }
        per_a[i] = best;
    });

    // regression over the upper half of the a-grid
    const std::size_t lo = a_grid.size() / 2;
    std::vector<double> xs, ys;
    for (std::size_t i = lo; i < a_grid.size(); ++i) {
        const double m = per_a[i].value;
        if (m < 1e-290) continue;  // underflowed points carry no slope information
        xs.push_back(std::log(std::sqrt(1.0 + a_grid[i] * a_grid[i])));
        ys.push_back(std::log(m));
    }
    if (xs.size() < 3) throw NumericalError("estimate_rho: degenerate fit (M underflow)");
    const LinearFit fit = least_squares(xs, ys);

    IrregularityEstimate est;
    est.gamma = gamma;
    est.rho_hat = -fit.slope;
    est.a_grid = a_grid;
    est.pair_grid = pairs;
    for (std::size_t i = 0; i < a_grid.size(); ++i) {
        if (per_a[i].value > est.seminorm) {
            est.seminorm = per_a[i].value;
            est.argmax_a = a_grid[i];
            est.argmax_s = per_a[i].s;
            est.argmax_t = per_a[i].t;
        }
    }
    return est;
}

}  // namespace modisperse
