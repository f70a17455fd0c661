#include "modisperse/quadrature_reference.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace modisperse::quadref {

namespace {

// 10-point Gauss-Legendre on [-1, 1].
constexpr double kGlNodes[10] = {
    -0.97390652851717172008, -0.86506336668898451073, -0.67940956829902440623,
    -0.43339539412924719080, -0.14887433898163121088, 0.14887433898163121088,
    0.43339539412924719080,  0.67940956829902440623,  0.86506336668898451073,
    0.97390652851717172008};
constexpr double kGlWeights[10] = {
    0.06667134430868813759, 0.14945134915058059315, 0.21908636251598204400,
    0.26926671930999635509, 0.29552422471475287017, 0.29552422471475287017,
    0.26926671930999635509, 0.21908636251598204400, 0.14945134915058059315,
    0.06667134430868813759};

struct Panel {
    double a, b;
};

// Quadrature panels over [s, t]: split at the path's grid breakpoints, then
// subdivide each piece so that a_max * |slope| * len <= phase_budget.
std::vector<Panel> build_panels(const ModulationPath& path, double s, double t, double a_max,
                                double phase_budget) {
    std::vector<Panel> panels;
    const double dt = path.horizon() / path.segments();
    const auto& w = path.samples();
    double cur = s;
    while (cur < t - 1e-15 * std::max(1.0, t)) {
        int seg = std::min(static_cast<int>(cur / dt), path.segments() - 1);
        const double seg_end = std::min(t, (seg + 1) * dt);
        const double slope = (w[seg + 1] - w[seg]) / dt;
        const double len = seg_end - cur;
        const double total_phase = a_max * std::abs(slope) * len;
        const int n_sub = std::max(1, static_cast<int>(std::ceil(total_phase / phase_budget)));
        for (int q = 0; q < n_sub; ++q) {
            panels.push_back({cur + len * q / n_sub, cur + len * (q + 1) / n_sub});
        }
        cur = seg_end;
    }
    return panels;
}

// exp(-i theta_j), theta_j = (2 pi j / lambda)^3 w, for j in [-K, K].
std::vector<complexd> twists(double lambda, int K, double w) {
    std::vector<complexd> tw(2 * K + 1);
    const double c = std::pow(2.0 * M_PI / lambda, 3.0);
    for (int j = -K; j <= K; ++j) {
        tw[j + K] = std::polar(1.0, -c * double(j) * j * j * w);
    }
    return tw;
}

}  // namespace

TorusField x_kdv_reference(const ModulationPath& path, double lambda, int K, double s, double t,
                           const TorusField& psi1, const TorusField& psi2,
                           double phase_budget) {
    if (s > t) throw std::invalid_argument("x_kdv_reference: requires s <= t");
    const int band = 2 * K;
    TorusField out(lambda, band, psi1.real_flag() && psi2.real_flag());
    if (s == t) return out;

    // Max resonance phase magnitude: |k^3 - k1^3 - k2^3| = 3 |k k1 k2| with
    // |k1|,|k2| <= K, k = k1 + k2.
    const double a_max = 3.0 * std::pow(2.0 * M_PI / lambda, 3.0) * 2.0 * K * K * K;
    const auto panels = build_panels(path, s, t, a_max, phase_budget);

    const int G = 4 * K + 4;  // alias-free for products with modes up to 2K
    std::vector<complexd> roots(G);
    for (int g = 0; g < G; ++g) roots[g] = std::polar(1.0, 2.0 * M_PI * g / G);

    std::vector<complexd> acc(2 * band + 1, complexd(0.0));
    std::vector<complexd> u1(G), u2(G);
    for (const auto& p : panels) {
        const double half = 0.5 * (p.b - p.a);
        const double mid = 0.5 * (p.a + p.b);
        for (int node = 0; node < 10; ++node) {
            const double sigma = mid + half * kGlNodes[node];
            const double weight = half * kGlWeights[node];
            const auto tw = twists(lambda, K, path.value(sigma));
            // synthesize (1/lambda) sum c_j tw_j e^{2 pi i j g / G}
            for (int g = 0; g < G; ++g) {
                complexd s1(0.0), s2(0.0);
                for (int j = -K; j <= K; ++j) {
                    if (j == 0) continue;
                    const complexd e = roots[((j % G) + G) * g % G];
                    s1 += psi1.coeff(j) * tw[j + K] * e;
                    s2 += psi2.coeff(j) * tw[j + K] * e;
                }
                u1[g] = s1 / lambda;
                u2[g] = s2 / lambda;
            }
            // analyze the pointwise product and accumulate, untwisting the
            // output mode; p_hat(j) = (lambda / G) sum_g u1 u2 e^{-2 pi i j g / G}
            for (int j = -band; j <= band; ++j) {
                if (j == 0) continue;
                complexd ph(0.0);
                for (int g = 0; g < G; ++g) {
                    ph += u1[g] * u2[g] * std::conj(roots[((j % G) + G) * g % G]);
                }
                ph *= lambda / G;
                const double c = std::pow(2.0 * M_PI / lambda, 3.0);
                const complexd untwist = std::polar(1.0, c * double(j) * j * j * path.value(sigma));
                const complexd symbol(0.0, 2.0 * M_PI * j / lambda);
                acc[j + band] += weight * untwist * symbol * ph;
            }
        }
    }
    for (int j = -band; j <= band; ++j) {
        if (j == 0) continue;
        out.set_coeff(j, acc[j + band]);
    }
    return out;
}

TorusField x_mkdv_reference(const ModulationPath& path, double lambda, int K, double s, double t,
                            const TorusField& psi1, const TorusField& psi2,
                            const TorusField& psi3, double phase_budget) {
    if (s > t) throw std::invalid_argument("x_mkdv_reference: requires s <= t");
    const int band = 3 * K;
    TorusField out(lambda, band,
                   psi1.real_flag() && psi2.real_flag() && psi3.real_flag());
    if (s == t) return out;

    // |k^3 - k1^3 - k2^3 - k3^3| = 3 |(k-k1)(k-k2)(k-k3)| <= 3 (2K)^3.
    const double a_max = 3.0 * std::pow(2.0 * M_PI / lambda, 3.0) * 8.0 * K * K * K;
    const auto panels = build_panels(path, s, t, a_max, phase_budget);

    std::vector<complexd> acc(2 * band + 1, complexd(0.0));
    for (const auto& p : panels) {
        const double half = 0.5 * (p.b - p.a);
        const double mid = 0.5 * (p.a + p.b);
        for (int node = 0; node < 10; ++node) {
            const double sigma = mid + half * kGlNodes[node];
            const double weight = half * kGlWeights[node];
            const auto tw = twists(lambda, K, path.value(sigma));
            const double c = std::pow(2.0 * M_PI / lambda, 3.0);
            for (int j = -band; j <= band; ++j) {
                if (j == 0) continue;
                complexd sum(0.0);
                for (int j1 = std::max(-K, j - 2 * K); j1 <= std::min(K, j + 2 * K); ++j1) {
                    if (j1 == 0 || j1 == j) continue;
                    const complexd a1 = psi1.coeff(j1) * tw[j1 + K];
                    if (a1 == complexd(0.0)) continue;
                    for (int j2 = std::max(-K, j - j1 - K); j2 <= std::min(K, j - j1 + K);
                         ++j2) {
                        const int j3 = j - j1 - j2;
                        if (j2 == 0 || j3 == 0 || j2 == j || j3 == j) continue;
                        sum += a1 * psi2.coeff(j2) * tw[j2 + K] * psi3.coeff(j3) * tw[j3 + K];
                    }
                }
                const complexd untwist = std::polar(1.0, c * double(j) * j * j * path.value(sigma));
                const complexd symbol(0.0, 2.0 * M_PI * j / lambda);
                acc[j + band] += weight * untwist * symbol * sum / (lambda * lambda);
            }
        }
    }
    for (int j = -band; j <= band; ++j) {
        if (j == 0) continue;
        out.set_coeff(j, acc[j + band]);
    }
    return out;
}

}  // namespace modisperse::quadref
