#include "modisperse/path.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace modisperse {

namespace {

constexpr double kSeriesThreshold = 1e-4;  // |a*m*dr| below which the Taylor form is used

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place radix-2 Cooley-Tukey, forward transform (e^{-2 pi i jk/N}).
void fft(std::vector<complexd>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * M_PI / static_cast<double>(len);
        const complexd wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            complexd w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const complexd u = a[i + k];
                const complexd v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// Autocovariance of fractional Gaussian noise at lag k, step variance sd2.
double fgn_cov(int k, double hurst, double sd2) {
    const double kk = std::abs(static_cast<double>(k));
    const double h2 = 2.0 * hurst;
    return 0.5 * sd2 *
           (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + std::pow(std::abs(kk - 1.0), h2));
}

// Davies-Harte: exact fGn sample of length n (n a power of two), or empty on
// an indefinite circulant spectrum.
std::vector<double> davies_harte(double hurst, int n, double sd2, GaussianSource& rng) {
    const int m = 2 * n;
    std::vector<complexd> c(m);
    for (int k = 0; k <= n; ++k) c[k] = fgn_cov(k, hurst, sd2);
    for (int k = 1; k < n; ++k) c[m - k] = c[k];
    fft(c);
    double lmin = 0.0, lmax = 0.0;
    for (auto& v : c) {
        lmin = std::min(lmin, v.real());
        lmax = std::max(lmax, v.real());
    }
    if (lmin < -1e-10 * std::max(1.0, lmax)) return {};

    std::vector<complexd> a(m);
    const double md = static_cast<double>(m);
    a[0] = std::sqrt(std::max(0.0, c[0].real()) / md) * rng.normal();
    for (int k = 1; k < n; ++k) {
        const double sd = std::sqrt(std::max(0.0, c[k].real()) / (2.0 * md));
        const double re = rng.normal();
        const double im = rng.normal();
        a[k] = complexd(sd * re, sd * im);
        a[m - k] = std::conj(a[k]);
    }
    a[n] = std::sqrt(std::max(0.0, c[n].real()) / md) * rng.normal();
    fft(a);
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = a[i].real();
    return x;
}

// Hosking / Durbin-Levinson recursion: exact fGn for arbitrary n, O(n^2).
std::vector<double> hosking(double hurst, int n, double sd2, GaussianSource& rng) {
    std::vector<double> gamma(n);
    for (int k = 0; k < n; ++k) gamma[k] = fgn_cov(k, hurst, sd2);
    std::vector<double> x(n), phi, phi_next;
    double sigma2 = gamma[0];
    x[0] = std::sqrt(sigma2) * rng.normal();
    for (int i = 1; i < n; ++i) {
        double nu = gamma[i];
        for (int j = 0; j < i - 1; ++j) nu -= phi[j] * gamma[i - 1 - j];
        const double phi_ii = nu / sigma2;
        phi_next.assign(i, 0.0);
        phi_next[i - 1] = phi_ii;
        for (int j = 0; j < i - 1; ++j) phi_next[j] = phi[j] - phi_ii * phi[i - 2 - j];
        sigma2 *= (1.0 - phi_ii * phi_ii);
        if (!(sigma2 > 0.0)) {
            throw NumericalError("fbm: covariance factorization lost positivity");
        }
        double mean = 0.0;
        for (int j = 0; j < i; ++j) mean += phi_next[j] * x[i - 1 - j];
        x[i] = mean + std::sqrt(sigma2) * rng.normal();
        phi.swap(phi_next);
    }
    return x;
}

}  // namespace

std::string to_string(PathKind k) {
    switch (k) {
        case PathKind::fbm: return "fbm";
        case PathKind::brownian: return "brownian";
        case PathKind::linear: return "linear";
        case PathKind::constant: return "constant";
        case PathKind::custom: return "custom";
    }
    return "custom";
}

PathKind path_kind_from_string(const std::string& s) {
    if (s == "fbm") return PathKind::fbm;
    if (s == "brownian") return PathKind::brownian;
    if (s == "linear") return PathKind::linear;
    if (s == "constant") return PathKind::constant;
    if (s == "custom") return PathKind::custom;
    throw std::invalid_argument("unknown path kind: " + s);
}

ModulationPath::ModulationPath(double horizon, std::vector<double> samples, PathKind kind,
                               double kind_param)
    : horizon_(horizon), samples_(std::move(samples)), kind_(kind), kind_param_(kind_param) {
    if (!(horizon_ > 0.0)) throw std::invalid_argument("path horizon must be > 0");
    if (samples_.size() < 2) throw std::invalid_argument("path needs n >= 1 segments");
    for (double v : samples_) {
        if (!std::isfinite(v)) throw std::invalid_argument("path samples must be finite");
    }
}

ModulationPath ModulationPath::constant(double level, int n, double horizon) {
    return ModulationPath(horizon, std::vector<double>(n + 1, level), PathKind::constant, level);
}

ModulationPath ModulationPath::linear(double slope, int n, double horizon) {
    std::vector<double> s(n + 1);
    for (int i = 0; i <= n; ++i) s[i] = slope * horizon * i / n;
    return ModulationPath(horizon, std::move(s), PathKind::linear, slope);
}

ModulationPath ModulationPath::custom(std::vector<double> samples, double horizon) {
    return ModulationPath(horizon, std::move(samples), PathKind::custom);
}

double ModulationPath::value(double t) const {
    if (t < -1e-12 * horizon_ || t > horizon_ * (1.0 + 1e-12)) {
        throw std::invalid_argument("path evaluation outside [0, T]");
    }
    const int n = segments();
    const double dt = horizon_ / n;
    int j = std::clamp(static_cast<int>(std::floor(t / dt)), 0, n - 1);
    const double frac = t / dt - j;
    return samples_[j] + (samples_[j + 1] - samples_[j]) * frac;
}

complexd ModulationPath::phi(double s, double t, double a) const {
    if (s > t) throw std::invalid_argument("phi: requires s <= t");
    if (s < -1e-12 * horizon_ || t > horizon_ * (1.0 + 1e-12)) {
        throw std::invalid_argument("phi: times outside [0, T]");
    }
    if (s == t) return {0.0, 0.0};
    const int n = segments();
    const double dt = horizon_ / n;
    const int j0 = std::clamp(static_cast<int>(std::floor(s / dt)), 0, n - 1);
    complexd acc(0.0, 0.0);
    for (int j = j0; j < n; ++j) {
        const double seg_lo = j * dt;
        if (seg_lo >= t) break;
        const double u0 = std::max(s, seg_lo);
        const double u1 = std::min(t, seg_lo + dt);
        const double d = u1 - u0;
        if (d <= 0.0) continue;
        const double slope = (samples_[j + 1] - samples_[j]) / dt;
        const double w0 = samples_[j] + slope * (u0 - seg_lo);
        const complexd base = std::polar(1.0, a * w0);
        const double ph = a * slope * d;  // total phase advance over the piece
        if (std::abs(ph) < kSeriesThreshold) {
            // d * sum_k (i ph)^k / (k+1)!
            const complexd iph(0.0, ph);
            complexd term(1.0, 0.0), sum(1.0, 0.0);
            for (int k = 1; k <= 5; ++k) {
                term *= iph / static_cast<double>(k + 1);
                sum += term;
            }
            acc += base * d * sum;
        } else {
            const complexd num = std::polar(1.0, ph) - complexd(1.0, 0.0);
            acc += base * d * (num / complexd(0.0, ph));
        }
    }
    return acc;
}

void ModulationPath::write_csv(std::ostream& os) const {
    os << "t,w\n";
    const int n = segments();
    for (int i = 0; i <= n; ++i) {
        os << fmt17(horizon_ * i / n) << ',' << fmt17(samples_[i]) << '\n';
    }
}

ModulationPath ModulationPath::read_csv(std::istream& is, PathKind kind, double kind_param) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("t,w", 0) != 0) {
        throw std::invalid_argument("path csv: missing 't,w' header");
    }
    std::vector<double> ts, ws;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        double t, w;
        char comma;
        if (!(ls >> t >> comma >> w) || comma != ',') {
            throw std::invalid_argument("path csv: bad row: " + line);
        }
        ts.push_back(t);
        ws.push_back(w);
    }
    if (ts.size() < 2) throw std::invalid_argument("path csv: need >= 2 rows");
    const double horizon = ts.back();
    const int n = static_cast<int>(ts.size()) - 1;
    for (int i = 0; i <= n; ++i) {
        if (std::abs(ts[i] - horizon * i / n) > 1e-9 * std::max(1.0, horizon)) {
            throw std::invalid_argument("path csv: grid is not uniform");
        }
    }
    return ModulationPath(horizon, std::move(ws), kind, kind_param);
}

ModulationPath sample_fbm(double hurst, int n, double horizon, std::uint64_t seed) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw std::invalid_argument("hurst must be in (0,1)");
    if (n < 2) throw std::invalid_argument("sample_fbm: n >= 2 required");
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
    const double sd2 = std::pow(horizon / n, 2.0 * hurst);
    GaussianSource rng(seed);
    std::vector<double> incr;
    if (is_pow2(n)) incr = davies_harte(hurst, n, sd2, rng);
    if (incr.empty()) {
        GaussianSource rng2(seed);  // fallback restarts the draw sequence
        incr = hosking(hurst, n, sd2, rng2);
    }
    std::vector<double> w(n + 1, 0.0);
    for (int i = 0; i < n; ++i) w[i + 1] = w[i] + incr[i];
    return ModulationPath(horizon, std::move(w), PathKind::fbm, hurst);
}

ModulationPath sample_brownian(int n, double horizon, std::uint64_t seed) {
    ModulationPath p = sample_fbm(0.5, n, horizon, seed);
    return ModulationPath(horizon, p.samples(), PathKind::brownian, 0.5);
}

}  // namespace modisperse
