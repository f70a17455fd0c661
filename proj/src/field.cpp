#include "modisperse/field.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace modisperse {

TorusField::TorusField(double lambda, int K, bool real_flag)
    : lambda_(lambda), K_(K), real_(real_flag), c_(2 * K + 1, complexd(0.0, 0.0)) {
    if (!(lambda >= 1.0)) throw std::invalid_argument("torus scale lambda must be >= 1");
    if (K < 1) throw std::invalid_argument("mode cutoff K must be >= 1");
}

void TorusField::set_coeff(int j, complexd v) {
    if (j == 0) throw std::invalid_argument("fields are mean-zero: mode 0 is not settable");
    if (std::abs(j) > K_) throw std::invalid_argument("mode index beyond cutoff");
    c_[j + K_] = v;
}

int TorusField::top_mode() const {
    for (int j = K_; j >= 1; --j) {
        if (coeff(j) != complexd(0.0) || coeff(-j) != complexd(0.0)) return j;
    }
    return 0;
}

TorusField& TorusField::operator+=(const TorusField& o) {
    if (!same_torus(o)) throw std::invalid_argument("field torus mismatch");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    real_ = real_ && o.real_;
    return *this;
}

TorusField& TorusField::operator-=(const TorusField& o) {
    if (!same_torus(o)) throw std::invalid_argument("field torus mismatch");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    real_ = real_ && o.real_;
    return *this;
}

TorusField& TorusField::operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
}

double sobolev_norm(const TorusField& f, double alpha) {
    double acc = 0.0;
    for (int j = 1; j <= f.cutoff(); ++j) {
        const double k = j / f.lambda();
        const double w = std::pow(k, 2.0 * alpha);
        acc += w * (std::norm(f.coeff(j)) + std::norm(f.coeff(-j)));
    }
    return std::sqrt(acc / f.lambda());
}

complexd inner_product(const TorusField& f, const TorusField& g) {
    if (!f.same_torus(g)) throw std::invalid_argument("field torus mismatch");
    complexd acc(0.0, 0.0);
    for (int j = -f.cutoff(); j <= f.cutoff(); ++j) {
        if (j == 0) continue;
        acc += std::conj(f.coeff(j)) * g.coeff(j);
    }
    return acc / f.lambda();
}

double l2_distance(const TorusField& f, const TorusField& g) {
    if (!f.same_torus(g)) throw std::invalid_argument("field torus mismatch");
    double acc = 0.0;
    for (int j = -f.cutoff(); j <= f.cutoff(); ++j) {
        if (j == 0) continue;
        acc += std::norm(f.coeff(j) - g.coeff(j));
    }
    return std::sqrt(acc / f.lambda());
}

TorusField with_cutoff(const TorusField& f, int K_new) {
    TorusField out(f.lambda(), K_new, f.real_flag());
    const int m = std::min(K_new, f.cutoff());
    for (int j = -m; j <= m; ++j) {
        if (j == 0) continue;
        out.set_coeff(j, f.coeff(j));
    }
    return out;
}

TorusField project(const TorusField& f, double N) {
    if (N < 0.0) throw std::invalid_argument("project: N >= 0 required");
    TorusField out = f;
    for (int j = -f.cutoff(); j <= f.cutoff(); ++j) {
        if (j == 0) continue;
        if (std::abs(j / f.lambda()) > N) out.set_coeff(j, complexd(0.0));
    }
    return out;
}

std::vector<complexd> evaluate(const TorusField& f, std::span<const double> x_grid) {
    std::vector<complexd> out(x_grid.size(), complexd(0.0));
    const double two_pi = 2.0 * M_PI;
    for (std::size_t q = 0; q < x_grid.size(); ++q) {
        complexd acc(0.0);
        for (int j = -f.cutoff(); j <= f.cutoff(); ++j) {
            if (j == 0) continue;
            const complexd c = f.coeff(j);
            if (c == complexd(0.0)) continue;
            acc += c * std::polar(1.0, two_pi * (j / f.lambda()) * x_grid[q]);
        }
        out[q] = acc / f.lambda();
    }
    return out;
}

TorusField random_field(double lambda, int K, double alpha, std::uint64_t seed, bool real_flag) {
    GaussianSource rng(seed);
    TorusField f(lambda, K, real_flag);
    for (int j = 1; j <= K; ++j) {
        const double mag = std::pow(std::abs(j / lambda), -alpha - 0.5);
        const double th1 = 2.0 * M_PI * rng.uniform();
        f.set_coeff(j, std::polar(mag, th1));
        if (real_flag) {
            f.set_coeff(-j, std::conj(f.coeff(j)));
        } else {
            const double th2 = 2.0 * M_PI * rng.uniform();
            f.set_coeff(-j, std::polar(mag, th2));
        }
    }
    const double nrm = sobolev_norm(f, alpha);
    f *= 1.0 / nrm;
    return f;
}

void TorusField::write_csv(std::ostream& os) const {
    os << "# lambda=" << fmt17(lambda_) << " K=" << K_ << " real=" << (real_ ? 1 : 0) << '\n';
    os << "j,re,im\n";
    for (int j = -K_; j <= K_; ++j) {
        if (j == 0) continue;
        os << j << ',' << fmt17(coeff(j).real()) << ',' << fmt17(coeff(j).imag()) << '\n';
    }
}

TorusField TorusField::read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("# lambda=", 0) != 0) {
        throw std::invalid_argument("field csv: missing metadata line");
    }
    double lambda = 0.0;
    int K = 0, real_int = 0;
    if (std::sscanf(line.c_str(), "# lambda=%lf K=%d real=%d", &lambda, &K, &real_int) != 3) {
        throw std::invalid_argument("field csv: bad metadata line");
    }
    if (!std::getline(is, line) || line.rfind("j,re,im", 0) != 0) {
        throw std::invalid_argument("field csv: missing 'j,re,im' header");
    }
    TorusField f(lambda, K, real_int != 0);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int j;
        double re, im;
        char c1, c2;
        if (!(ls >> j >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',') {
            throw std::invalid_argument("field csv: bad row: " + line);
        }
        f.set_coeff(j, complexd(re, im));
    }
    return f;
}

}  // namespace modisperse
