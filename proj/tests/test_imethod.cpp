#include <doctest.h>

#include <cmath>
#include <memory>

#include "modisperse/imethod.hpp"

using namespace modisperse;

TEST_CASE("multiplier symbol regions") {
    IMultiplier mult(-0.5, 4.0);
    CHECK(mult.m(0.0) == 1.0);
    CHECK(mult.m(0.5) == 1.0);
    CHECK(mult.m(0.999) == 1.0);
    CHECK(mult.m(10.0) == doctest::Approx(std::pow(10.0, -0.5)).epsilon(1e-15));
    CHECK(mult.m(20.0) == doctest::Approx(std::pow(20.0, -0.5)).epsilon(1e-15));
    CHECK(mult.m(-20.0) == mult.m(20.0));
    // monotone nonincreasing through the interpolation region
    double prev = 2.0;
    for (double x = 0.5; x < 40.0; x *= 1.07) {
        const double v = mult.m(x);
        CHECK(v <= prev * (1.0 + 1e-14));
        prev = v;
    }
    // m_N rescales the symbol argument
    CHECK(mult.mN(2.0) == 1.0);                    // |k|/N = 0.5 < 1
    CHECK(mult.mN(40.0) == mult.m(10.0));
    CHECK_THROWS_AS(IMultiplier(0.5, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(IMultiplier(-0.5, 0.5), std::invalid_argument);
}

TEST_CASE("apply_I acts coefficient-wise and commutes with projection") {
    IMultiplier mult(-0.25, 2.0);
    auto f = random_field(1.0, 40, 0.5, 3, false);
    auto g = apply_I(mult, f);
    CHECK(g.coeff(1) == f.coeff(1));  // |k|/N = 0.5, identity region
    CHECK(std::abs(g.coeff(20) - std::pow(10.0, -0.25) * f.coeff(20)) < 1e-15);
    CHECK(std::abs(g.coeff(30) - std::pow(15.0, -0.25) * f.coeff(30)) < 1e-15);
    // double application multiplies by m^2
    auto gg = apply_I(mult, g);
    for (int j = -40; j <= 40; ++j) {
        if (j == 0) continue;
        const double m = mult.mN(j / 1.0);
        CHECK(std::abs(gg.coeff(j) - m * m * f.coeff(j)) < 1e-15);
    }
    auto a = apply_I(mult, project(f, 12.0));
    auto b = project(apply_I(mult, f), 12.0);
    for (int j = -40; j <= 40; ++j) {
        if (j == 0) continue;
        CHECK(a.coeff(j) == b.coeff(j));
    }
}

TEST_CASE("rescale at lambda = 1 is the identity") {
    auto p = sample_brownian(64, 0.5, 9);
    auto f = random_field(1.0, 8, 0.25, 4);
    auto [p1, f1] = rescale(p, f, 1.0);
    CHECK(p1.horizon() == p.horizon());
    CHECK(p1.samples().size() == p.samples().size());
    for (std::size_t i = 0; i < p.samples().size(); ++i) {
        CHECK(p1.samples()[i] == doctest::Approx(p.samples()[i]).epsilon(1e-14));
    }
    CHECK(f1.lambda() == 1.0);
    for (int j = -8; j <= 8; ++j) CHECK(f1.coeff(j) == f.coeff(j));
}

TEST_CASE("rescaling composes") {
    auto p = sample_brownian(32, 1.0, 6);
    auto f = random_field(1.0, 6, 0.5, 11);
    auto [p2, f2] = rescale(p, f, 2.0);
    auto [p4a, f4a] = rescale(p2, f2, 2.0);
    auto [p4b, f4b] = rescale(p, f, 4.0);
    CHECK(p4a.horizon() == doctest::Approx(p4b.horizon()).epsilon(1e-14));
    REQUIRE(p4a.samples().size() == p4b.samples().size());
    for (std::size_t i = 0; i < p4a.samples().size(); ++i) {
        CHECK(p4a.samples()[i] == doctest::Approx(p4b.samples()[i]).epsilon(1e-12));
    }
    CHECK(f4a.lambda() == f4b.lambda());
    for (int j = -6; j <= 6; ++j) {
        CHECK(std::abs(f4a.coeff(j) - f4b.coeff(j)) < 1e-15);
    }
}

TEST_CASE("rescaled field loses L2 mass like lambda^-3/2") {
    auto p = sample_brownian(32, 1.0, 2);
    auto f = random_field(1.0, 8, 0.0, 7);
    auto [p2, f2] = rescale(p, f, 2.0);
    (void)p2;
    CHECK(l2_norm(f2) == doctest::Approx(std::pow(2.0, -1.5) * l2_norm(f)).epsilon(1e-13));
}

TEST_CASE("commutator vanishes in the low-frequency and trivial-symbol cases") {
    auto path = std::make_shared<ModulationPath>(sample_brownian(256, 1.0, 8));
    ModulatedOperator op(Equation::kdv, path, 1.0, 4);
    auto f = random_field(1.0, 4, 0.5, 5, true);
    auto g = random_field(1.0, 4, 0.5, 6, true);
    // output band 2K = 8 sits entirely below N = 20, so I is the identity
    CHECK(commutator_norm(op, IMultiplier(-0.5, 20.0), 0.1, 0.7, f, g) == 0.0);
    // alpha = 0 means m == 1 everywhere regardless of N
    CHECK(commutator_norm(op, IMultiplier(0.0, 2.0), 0.1, 0.7, f, g) == 0.0);
}

TEST_CASE("commutator is symmetric in its kdv arguments") {
    auto path = std::make_shared<ModulationPath>(sample_brownian(256, 1.0, 12));
    ModulatedOperator op(Equation::kdv, path, 1.0, 16);
    IMultiplier mult(-0.5, 2.0);
    auto f = random_field(1.0, 16, 0.5, 7, true);
    auto g = random_field(1.0, 16, 0.5, 8, true);
    const double ab = commutator_norm(op, mult, 0.0, 0.5, f, g);
    const double ba = commutator_norm(op, mult, 0.0, 0.5, g, f);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    CHECK(ab > 0.0);
}

TEST_CASE("almost conservation on zero data is exactly flat") {
    AlmostConservationConfig cfg;
    cfg.zero_data = true;
    cfg.K = 4;
    cfg.windows = 2;
    cfg.samples_per_unit = 32;
    cfg.step_hint = 1.0 / 16.0;
    auto rep = almost_conservation_run(cfg);
    CHECK(rep.lambda == 1.0);
    REQUIRE(rep.windows.size() == 2);
    for (const auto& w : rep.windows) {
        CHECK(w.energy0 == 0.0);
        CHECK(w.energy1 == 0.0);
        CHECK(w.commutator_term == 0.0);
        CHECK(w.remainder == 0.0);
    }
    CHECK(rep.success);
    CHECK(rep.failure_window == -1);
}

TEST_CASE("almost conservation smoke run lands on the calibrated energy") {
    AlmostConservationConfig cfg;
    cfg.alpha = -0.25;
    cfg.N = 2.0;
    cfg.epsilon0 = 0.1;
    cfg.K = 8;
    cfg.windows = 1;
    cfg.samples_per_unit = 64;
    cfg.step_hint = 1.0 / 32.0;
    cfg.tol = 1e-8;
    auto rep = almost_conservation_run(cfg);
    CHECK(rep.lambda > 1.0);
    REQUIRE(rep.windows.size() == 1);
    const auto& w = rep.windows.front();
    CHECK(w.energy0 == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(std::isfinite(w.energy1));
    CHECK(std::abs(w.energy1 - w.energy0) < 0.05);
    // the first-order term plus remainder reconstructs the energy increment
    const double inc = w.energy1 * w.energy1 - w.energy0 * w.energy0;
    CHECK(std::abs(inc - (w.commutator_term + w.remainder)) < 1e-12);
    CHECK(rep.success);
}
