#include <doctest.h>

#include <cmath>
#include <sstream>

#include "modisperse/path.hpp"

using namespace modisperse;

namespace {
double rel_err(complexd got, complexd want) {
    const double scale = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / scale;
}
}  // namespace

TEST_CASE("phi closed forms") {
    SUBCASE("a = 0 gives t - s") {
        auto p = sample_brownian(64, 1.0, 7);
        CHECK(rel_err(p.phi(0.1, 0.7, 0.0), complexd(0.6, 0.0)) < 1e-12);
    }
    SUBCASE("constant path") {
        auto p = ModulationPath::constant(2.5, 16, 1.0);
        const double a = 17.0, s = 0.125, t = 0.875;
        const complexd want = (t - s) * std::polar(1.0, a * 2.5);
        CHECK(rel_err(p.phi(s, t, a), want) < 1e-12);
    }
    SUBCASE("linear path w_r = r from 0") {
        auto p = ModulationPath::linear(1.0, 32, 1.0);
        const double a = 9.0, t = 0.75;
        const complexd ia(0.0, a);
        const complexd want = (std::exp(ia * t) - 1.0) / ia;
        CHECK(rel_err(p.phi(0.0, t, a), want) < 1e-12);
    }
}

TEST_CASE("phi properties on random triples") {
    auto p = sample_brownian(128, 1.0, 3);
    GaussianSource rng(99);
    for (int it = 0; it < 500; ++it) {
        double s = rng.uniform(), t = rng.uniform(), u = rng.uniform();
        if (s > t) std::swap(s, t);
        const double mid = s + (t - s) * u;
        const double a = std::exp(8.0 * (rng.uniform() - 0.5));
        const complexd full = p.phi(s, t, a);
        // additivity
        CHECK(std::abs(p.phi(s, mid, a) + p.phi(mid, t, a) - full) < 1e-12);
        // conjugation
        CHECK(std::abs(p.phi(s, t, -a) - std::conj(full)) < 1e-14);
        // modulus bound
        CHECK(std::abs(full) <= (t - s) * (1.0 + 1e-12) + 1e-15);
    }
}

TEST_CASE("phi argument validation") {
    auto p = ModulationPath::constant(0.0, 8, 1.0);
    CHECK_THROWS_AS(p.phi(0.5, 0.4, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(p.phi(-0.1, 0.4, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(p.phi(0.5, 1.4, 1.0), std::invalid_argument);
}

TEST_CASE("fbm determinism and validation") {
    auto a = sample_fbm(0.75, 64, 2.0, 42);
    auto b = sample_fbm(0.75, 64, 2.0, 42);
    CHECK(a.samples() == b.samples());
    CHECK(a.samples()[0] == 0.0);
    CHECK_THROWS_AS(sample_fbm(1.5, 64, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_fbm(0.0, 64, 1.0, 1), std::invalid_argument);
}

TEST_CASE("brownian increments match the law over many seeds") {
    const int n = 8;
    const double T = 1.0;
    double sum2 = 0.0;
    int count = 0;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        auto p = sample_brownian(n, T, seed);
        for (int i = 0; i < n; ++i) {
            const double d = p.samples()[i + 1] - p.samples()[i];
            sum2 += d * d;
            ++count;
        }
    }
    const double var = sum2 / count;
    CHECK(var == doctest::Approx(T / n).epsilon(0.03));
}

TEST_CASE("fbm H=0.75 covariance matches the closed form") {
    const int n = 8;
    const double H = 0.75;
    // E[w(s) w(t)] at grid nodes (i,j) = (2,6) and (4,4)
    double acc26 = 0.0, acc44 = 0.0;
    const int trials = 20000;
    for (std::uint64_t seed = 0; seed < trials; ++seed) {
        auto p = sample_fbm(H, n, 1.0, seed + 1000000);
        acc26 += p.samples()[2] * p.samples()[6];
        acc44 += p.samples()[4] * p.samples()[4];
    }
    auto cov = [&](double s, double t) {
        return 0.5 * (std::pow(s, 2 * H) + std::pow(t, 2 * H) - std::pow(std::abs(t - s), 2 * H));
    };
    CHECK(acc26 / trials == doctest::Approx(cov(2.0 / n, 6.0 / n)).epsilon(0.05));
    CHECK(acc44 / trials == doctest::Approx(cov(4.0 / n, 4.0 / n)).epsilon(0.05));
}

TEST_CASE("path csv round-trips bit-exactly") {
    auto p = sample_fbm(0.3, 37, 1.5, 11);
    std::ostringstream os;
    p.write_csv(os);
    std::istringstream is(os.str());
    auto q = ModulationPath::read_csv(is);
    CHECK(q.horizon() == p.horizon());
    CHECK(q.samples() == p.samples());
    std::ostringstream os2;
    q.write_csv(os2);
    CHECK(os.str() == os2.str());
}

TEST_CASE("value interpolates linearly") {
    auto p = ModulationPath::linear(2.0, 4, 2.0);
    CHECK(p.value(0.75) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(p.value(0.0) == 0.0);
    CHECK(p.value(2.0) == doctest::Approx(4.0).epsilon(1e-14));
}
