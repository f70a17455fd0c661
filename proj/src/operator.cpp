#include "modisperse/operator.hpp"

#include <algorithm>
#include <cmath>

namespace modisperse {

std::string to_string(Equation e) { return e == Equation::kdv ? "kdv" : "mkdv"; }

Equation equation_from_string(const std::string& s) {
    if (s == "kdv") return Equation::kdv;
    if (s == "mkdv") return Equation::mkdv;
    throw std::invalid_argument("unknown equation: " + s);
}

int PhaseIntegralCache::intern(double t) {
    auto [it, inserted] = times_.try_emplace(t, static_cast<int>(times_.size()));
    return it->second;
}

complexd PhaseIntegralCache::get(const ModulationPath& path, double phase_scale, double s,
                                 double t, long long key) {
    Key k;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        k = Key{intern(s), intern(t), key};
        auto it = values_.find(k);
        if (it != values_.end()) {
            ++hits_;
            return it->second;
        }
        ++misses_;
    }
    const complexd v = path.phi(s, t, phase_scale * static_cast<double>(key));
    {
        std::lock_guard<std::mutex> lock(mutex_);
        values_.emplace(k, v);
    }
    return v;
}

void PhaseIntegralCache::clear() {
    std::lock_guard<std::mutex> lock(mutex_);
    times_.clear();
    values_.clear();
    hits_ = misses_ = 0;
}

ModulatedOperator::ModulatedOperator(Equation eq, std::shared_ptr<const ModulationPath> path,
                                     double lambda, int K, double kappa)
    : eq_(eq), path_(std::move(path)), lambda_(lambda), K_(K) {
    if (!path_) throw std::invalid_argument("operator needs a path");
    if (!(lambda >= 1.0)) throw std::invalid_argument("lambda must be >= 1");
    if (K < 1) throw std::invalid_argument("K must be >= 1");
    const double two_pi = 2.0 * M_PI;
    phase_scale_ = kappa * two_pi * two_pi * two_pi / (lambda * lambda * lambda);
}

void ModulatedOperator::check_input(const TorusField& f) const {
    if (f.lambda() != lambda_ || f.cutoff() != K_) {
        throw std::invalid_argument("operator/field torus parameters mismatch");
    }
}

complexd ModulatedOperator::phi_cached(double s, double t, long long key) const {
    return cache_.get(*path_, phase_scale_, s, t, key);
}

TorusField ModulatedOperator::x_kdv(double s, double t, const TorusField& psi1,
                                    const TorusField& psi2, int out_band) const {
    check_input(psi1);
    check_input(psi2);
    if (s > t) throw std::invalid_argument("x_kdv: requires s <= t");
    if (out_band < 0) out_band = 2 * K_;
    TorusField out(lambda_, out_band, psi1.real_flag() && psi2.real_flag());
    if (s == t) return out;
    const double two_pi = 2.0 * M_PI;
    for (int j = -out_band; j <= out_band; ++j) {
        if (j == 0) continue;
        complexd acc(0.0);
        const int lo = std::max(-K_, j - K_);
        const int hi = std::min(K_, j + K_);
        for (int j1 = lo; j1 <= hi; ++j1) {
            const int j2 = j - j1;
            if (j1 == 0 || j2 == 0) continue;
            const complexd a = psi1.coeff(j1);
            if (a == complexd(0.0)) continue;
            const complexd b = psi2.coeff(j2);
            if (b == complexd(0.0)) continue;
            const long long key =
                static_cast<long long>(j) * j1 * j2;
            acc += phi_cached(s, t, key) * a * b;
        }
        const complexd symbol(0.0, two_pi * j / lambda_);
        out.set_coeff(j, symbol * acc / lambda_);
    }
    return out;
}

TorusField ModulatedOperator::x_mkdv(double s, double t, const TorusField& psi1,
                                     const TorusField& psi2, const TorusField& psi3,
                                     int out_band) const {
    check_input(psi1);
    check_input(psi2);
    check_input(psi3);
    if (s > t) throw std::invalid_argument("x_mkdv: requires s <= t");
    if (out_band < 0) out_band = 3 * K_;
    TorusField out(lambda_, out_band,
                   psi1.real_flag() && psi2.real_flag() && psi3.real_flag());
    if (s == t) return out;
    const double two_pi = 2.0 * M_PI;
    for (int j = -out_band; j <= out_band; ++j) {
        if (j == 0) continue;
        complexd acc(0.0);
        for (int j1 = -K_; j1 <= K_; ++j1) {
            if (j1 == 0 || j1 == j) continue;
            const complexd a = psi1.coeff(j1);
            if (a == complexd(0.0)) continue;
            for (int j2 = std::max(-K_, j - j1 - K_); j2 <= std::min(K_, j - j1 + K_); ++j2) {
                const int j3 = j - j1 - j2;
                if (j2 == 0 || j3 == 0 || j2 == j || j3 == j) continue;
                const complexd b = psi2.coeff(j2);
                if (b == complexd(0.0)) continue;
                const complexd c = psi3.coeff(j3);
                if (c == complexd(0.0)) continue;
                const long long key = static_cast<long long>(j - j1) * (j - j2) * (j - j3);
                acc += phi_cached(s, t, key) * a * b * c;
            }
        }
        const complexd symbol(0.0, two_pi * j / lambda_);
        out.set_coeff(j, symbol * acc / (lambda_ * lambda_));
    }
    return out;
}

TorusField ModulatedOperator::x_quadratic(double s, double t, const TorusField& g,
                                          int out_band) const {
    return eq_ == Equation::kdv ? x_kdv(s, t, g, g, out_band) : x_mkdv(s, t, g, g, g, out_band);
}

TorusField ModulatedOperator::x_truncated(double L, double s, double t, const TorusField& g,
                                          int out_band) const {
    const TorusField gl = project(g, L);
    return project(x_quadratic(s, t, gl, out_band), L);
}

std::vector<ProbeRow> operator_norm_probe(const ModulatedOperator& op, double alpha, double beta,
                                          double gamma, int n_samples,
                                          const std::vector<std::pair<double, double>>& pairs,
                                          std::uint64_t seed, int threads) {
    if (n_samples < 1) throw std::invalid_argument("probe needs >= 1 sample");
    std::vector<TorusField> samples;
    samples.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        samples.push_back(random_field(op.lambda(), op.cutoff(), alpha, seed + i));
    }
    // ratios[pair][sample]
    std::vector<std::vector<double>> ratios(pairs.size(), std::vector<double>(n_samples, 0.0));
    parallel_for(pairs.size() * n_samples, threads, [&](std::size_t idx) {
        const std::size_t p = idx / n_samples;
        const std::size_t i = idx % n_samples;
        const auto& [s, t] = pairs[p];
        const TorusField x = op.x_quadratic(s, t, samples[i]);
        ratios[p][i] = sobolev_norm(x, beta) / std::pow(t - s, gamma);
    });
    std::vector<ProbeRow> rows;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        std::vector<double> r = ratios[p];
        std::sort(r.begin(), r.end());
        ProbeRow row;
        row.K = op.cutoff();
        row.alpha = alpha;
        row.beta = beta;
        row.s = pairs[p].first;
        row.t = pairs[p].second;
        row.ratio_max = r.back();
        row.ratio_median = r[r.size() / 2];
        rows.push_back(row);
    }
    return rows;
}

}  // namespace modisperse
