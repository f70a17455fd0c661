#include <doctest.h>

#include <cmath>
#include <memory>

#include "modisperse/operator.hpp"
#include "modisperse/quadrature_reference.hpp"

using namespace modisperse;

namespace {

std::shared_ptr<const ModulationPath> flat_path() {
    return std::make_shared<ModulationPath>(ModulationPath::constant(0.0, 16, 1.0));
}

double coeff_distance(const TorusField& a, const TorusField& b) {
    double m = 0.0;
    const int K = std::min(a.cutoff(), b.cutoff());
    for (int j = -K; j <= K; ++j) {
        if (j == 0) continue;
        m = std::max(m, std::abs(a.coeff(j) - b.coeff(j)));
    }
    for (int j = K + 1; j <= a.cutoff(); ++j) {
        m = std::max({m, std::abs(a.coeff(j)), std::abs(a.coeff(-j))});
    }
    for (int j = K + 1; j <= b.cutoff(); ++j) {
        m = std::max({m, std::abs(b.coeff(j)), std::abs(b.coeff(-j))});
    }
    return m;
}

}  // namespace

TEST_CASE("kdv single-mode example on a frozen path") {
    ModulatedOperator op(Equation::kdv, flat_path(), 1.0, 4);
    TorusField e1(1.0, 4);
    e1.set_coeff(1, complexd(1.0, 0.0));
    const double s = 0.125, t = 0.875;
    auto h = op.x_kdv(s, t, e1, e1);
    // only j = 2 is populated: i * (2 pi 2) * (t - s)
    for (int j = -8; j <= 8; ++j) {
        if (j == 0) continue;
        const complexd want =
            (j == 2) ? complexd(0.0, 4.0 * M_PI * (t - s)) : complexd(0.0, 0.0);
        if (std::abs(j) <= h.cutoff()) {
            CHECK(std::abs(h.coeff(j) - want) < 1e-13);
        }
    }
}

TEST_CASE("kdv opposite modes cancel into the excluded zero mode") {
    ModulatedOperator op(Equation::kdv, flat_path(), 1.0, 4);
    TorusField p(1.0, 4), m(1.0, 4);
    p.set_coeff(1, complexd(1.0, 0.0));
    m.set_coeff(-1, complexd(1.0, 0.0));
    auto h = op.x_kdv(0.0, 1.0, p, m);
    CHECK(h.top_mode() == 0);
}

TEST_CASE("mkdv single-mode example and star restriction") {
    ModulatedOperator op(Equation::mkdv, flat_path(), 1.0, 4);
    TorusField e1(1.0, 4);
    e1.set_coeff(1, complexd(1.0, 0.0));
    const double s = 0.0, t = 0.5;
    auto h = op.x_mkdv(s, t, e1, e1, e1);
    // j = 3 from (1,1,1): i * (2 pi 3) * (t - s); j = 1 would need some
    // j_i = j or 0, which the star restriction removes.
    CHECK(std::abs(h.coeff(3) - complexd(0.0, 6.0 * M_PI * (t - s))) < 1e-13);
    CHECK(std::abs(h.coeff(1)) == 0.0);
    CHECK(std::abs(h.coeff(-1)) == 0.0);
}

TEST_CASE("argument symmetry") {
    auto path = std::make_shared<ModulationPath>(sample_brownian(256, 1.0, 11));
    auto f = random_field(1.0, 6, 0.25, 1, false);
    auto g = random_field(1.0, 6, 0.25, 2, false);
    auto u = random_field(1.0, 6, 0.25, 3, false);
    SUBCASE("kdv") {
        ModulatedOperator op(Equation::kdv, path, 1.0, 6);
        auto a = op.x_kdv(0.1, 0.9, f, g);
        auto b = op.x_kdv(0.1, 0.9, g, f);
        CHECK(coeff_distance(a, b) < 1e-12);
    }
    SUBCASE("mkdv") {
        ModulatedOperator op(Equation::mkdv, path, 1.0, 6);
        auto a = op.x_mkdv(0.1, 0.9, f, g, u);
        auto b = op.x_mkdv(0.1, 0.9, u, f, g);
        auto c = op.x_mkdv(0.1, 0.9, g, u, f);
        CHECK(coeff_distance(a, b) < 1e-12);
        CHECK(coeff_distance(a, c) < 1e-12);
    }
}

TEST_CASE("real inputs give real outputs") {
    auto path = std::make_shared<ModulationPath>(sample_brownian(256, 1.0, 4));
    auto f = random_field(1.0, 8, 0.5, 7, true);
    ModulatedOperator op(Equation::kdv, path, 1.0, 8);
    auto h = op.x_quadratic(0.0, 0.75, f);
    for (int j = 1; j <= h.cutoff(); ++j) {
        CHECK(std::abs(h.coeff(-j) - std::conj(h.coeff(j))) < 1e-13);
    }
    ModulatedOperator op3(Equation::mkdv, path, 1.0, 8);
    auto h3 = op3.x_quadratic(0.0, 0.75, f);
    for (int j = 1; j <= h3.cutoff(); ++j) {
        CHECK(std::abs(h3.coeff(-j) - std::conj(h3.coeff(j))) < 1e-13);
    }
}

TEST_CASE("increments are additive in time") {
    auto path = std::make_shared<ModulationPath>(sample_brownian(512, 1.0, 9));
    auto f = random_field(1.5, 8, 0.25, 5, true);
    for (auto eq : {Equation::kdv, Equation::mkdv}) {
        ModulatedOperator op(eq, path, 1.5, 8);
        auto full = op.x_quadratic(0.1, 0.9, f);
        auto a = op.x_quadratic(0.1, 0.6, f);
        auto b = op.x_quadratic(0.6, 0.9, f);
        CHECK(coeff_distance(a + b, full) < 1e-12);
    }
}

TEST_CASE("kdv conservation pairing vanishes") {
    auto path = std::make_shared<ModulationPath>(sample_brownian(512, 1.0, 13));
    ModulatedOperator op(Equation::kdv, path, 2.0, 16);
    auto f = random_field(2.0, 16, 0.5, 31, true);
    auto h = op.x_quadratic(0.2, 0.8, f);
    // Re<psi, X(psi,psi)> = 0 for real psi: the three rotations of each
    // resonant triple cancel, the modulation conjugating coherently.
    auto wide = with_cutoff(f, h.cutoff());
    CHECK(std::abs(inner_product(wide, h).real()) < 1e-12 * (1.0 + l2_norm(h)));
}

TEST_CASE("cache reuse is bitwise transparent") {
    auto path = std::make_shared<ModulationPath>(sample_brownian(256, 1.0, 21));
    ModulatedOperator op(Equation::kdv, path, 1.0, 8);
    auto f = random_field(1.0, 8, 0.25, 2, true);
    auto cold = op.x_quadratic(0.0, 0.5, f);
    const auto misses0 = op.cache().misses();
    CHECK(misses0 > 0);
    auto warm = op.x_quadratic(0.0, 0.5, f);
    CHECK(op.cache().hits() >= misses0);
    CHECK(coeff_distance(cold, warm) == 0.0);
    op.clear_cache();
    auto again = op.x_quadratic(0.0, 0.5, f);
    CHECK(coeff_distance(cold, again) == 0.0);
}

TEST_CASE("kdv matches the time-quadrature reference") {
    auto path = std::make_shared<ModulationPath>(sample_brownian(256, 1.0, 2));
    const double lambda = 1.0;
    const int K = 8;
    ModulatedOperator op(Equation::kdv, path, lambda, K);
    auto f = random_field(lambda, K, 0.25, 6, true);
    auto g = random_field(lambda, K, 0.25, 7, false);
    for (auto [s, t] : {std::pair{0.0, 0.25}, std::pair{0.4, 0.65}}) {
        auto fast = op.x_kdv(s, t, f, g);
        auto ref = quadref::x_kdv_reference(*path, lambda, K, s, t, f, g);
        const double rel = l2_distance(fast, ref) / l2_norm(ref);
        CHECK(rel < 1e-8);
    }
}

TEST_CASE("mkdv matches the time-quadrature reference") {
    auto path = std::make_shared<ModulationPath>(sample_brownian(256, 1.0, 3));
    const double lambda = 1.5;
    const int K = 6;
    ModulatedOperator op(Equation::mkdv, path, lambda, K);
    auto f = random_field(lambda, K, 0.25, 4, true);
    auto fast = op.x_mkdv(0.1, 0.35, f, f, f);
    auto ref = quadref::x_mkdv_reference(*path, lambda, K, 0.1, 0.35, f, f, f);
    const double rel = l2_distance(fast, ref) / l2_norm(ref);
    CHECK(rel < 1e-8);
}

TEST_CASE("truncation gap decays with L") {
    auto path = std::make_shared<ModulationPath>(sample_brownian(512, 1.0, 8));
    ModulatedOperator op(Equation::kdv, path, 1.0, 32);
    auto f = random_field(1.0, 32, 0.75, 12, true);
    auto full = op.x_quadratic(0.0, 0.5, f);
    double prev = 1e300;
    for (double L : {4.0, 8.0, 16.0, 32.0}) {
        auto trunc = op.x_truncated(L, 0.0, 0.5, f);
        const double gap = l2_distance(with_cutoff(full, trunc.cutoff()), trunc);
        CHECK(gap < prev);
        prev = gap;
    }
    // L covering the whole natural band reproduces the full increment
    auto same = op.x_truncated(64.0, 0.0, 0.5, f);
    CHECK(l2_distance(with_cutoff(full, same.cutoff()), same) < 1e-13);
}

TEST_CASE("degenerate intervals and validation") {
    auto path = flat_path();
    ModulatedOperator op(Equation::kdv, path, 1.0, 4);
    auto f = random_field(1.0, 4, 0.0, 1);
    auto z = op.x_quadratic(0.3, 0.3, f);
    CHECK(z.top_mode() == 0);
    TorusField wrong(2.0, 4);
    wrong.set_coeff(1, complexd(1.0, 0.0));
    CHECK_THROWS_AS(op.x_kdv(0.0, 0.5, f, wrong), std::invalid_argument);
}

TEST_CASE("probe rows are finite and deterministic") {
    auto path = std::make_shared<ModulationPath>(sample_brownian(256, 1.0, 6));
    ModulatedOperator op(Equation::kdv, path, 1.0, 8);
    std::vector<std::pair<double, double>> pairs = {{0.0, 0.25}, {0.25, 0.75}};
    auto rows1 = operator_norm_probe(op, 0.25, 0.25, 0.55, 4, pairs, 9, 1);
    auto rows2 = operator_norm_probe(op, 0.25, 0.25, 0.55, 4, pairs, 9, 3);
    REQUIRE(rows1.size() == pairs.size());
    for (std::size_t i = 0; i < rows1.size(); ++i) {
        CHECK(rows1[i].ratio_max == rows2[i].ratio_max);
        CHECK(rows1[i].ratio_median == rows2[i].ratio_median);
        CHECK(std::isfinite(rows1[i].ratio_max));
        CHECK(rows1[i].ratio_max >= rows1[i].ratio_median);
    }
}
