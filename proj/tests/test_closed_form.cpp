#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qes/closed_form.hpp"
#include "qes/errors.hpp"

using namespace qes;
using doctest::Approx;

namespace {

// Largest pointwise |residual| / ((|E|+1)|R|) of an explicit wavefunction,
// sampled on [q_lo, q_hi] where R is above the underflow floor.
double pointwise_residual(const QesSolution& sol, double q_lo, double q_hi) {
    const auto& e = sol.exponents;
    auto R = [&](long double q) {
        long double f = 1.0L;
        for (auto it = sol.prefactor.coeffs.rbegin(); it != sol.prefactor.coeffs.rend(); ++it) {
            f = f * q * q + *it;
        }
        return f * oracle::ansatz(q, e.alpha, e.beta, e.delta);
    };
    const double ll = sol.channel.L().l_l1();
    double worst = 0.0;
    const int n = 397;
    for (int i = 0; i <= n; ++i) {
        const long double q = q_lo + (q_hi - q_lo) * i / n;
        const long double r = R(q);
        if (std::abs(r) < 1e-250L) continue;
        const long double res = oracle::radial_residual(R, sol.params.a, sol.params.b, sol.params.c,
                                                        ll, sol.energy, q);
        worst = std::max(worst, static_cast<double>(std::abs(res / r)) / (std::abs(sol.energy) + 1));
    }
    return worst;
}

}  // namespace

TEST_CASE("exponents") {
    auto e = exponents({1, 1, 1});
    CHECK(e.alpha == -1.0);
    CHECK(e.beta == -1.0);
    CHECK(e.delta == 2.0);
    e = exponents({4, 0, 9});
    CHECK(e.alpha == -2.0);
    CHECK(e.beta == -3.0);
    CHECK(e.delta == 1.5);
    e = exponents({1, -3, 1});
    CHECK(e.delta == 0.0);
    CHECK_THROWS_AS(exponents({-1, 0, 1}), DomainError);
}

TEST_CASE("unconfined energy") {
    CHECK(energy_unconfined({-1, -1, 2}, 0) == 5.0);
    CHECK(energy_unconfined({-1, -1, 2}, 1) == 9.0);
    CHECK(energy_unconfined({-2, -3, 1.5}, 0) == 8.0);
    CHECK_THROWS_AS(energy_unconfined({-1, -1, 2}, -1), DomainError);
}

TEST_CASE("nodeless constraint") {
    CHECK(k0_constraint_residual({1, 1, 1}, 0.0) == 0.0);
    CHECK(k0_constraint_residual({1, 1, 1}, 1.0) == -2.0);
    CHECK(k0_constraint_residual({1, 3, 1}, 0.0) == 4.0);
    CHECK(k0_constraint_residual({1, 0, 1}, 0.0) == -1.25);
}

TEST_CASE("nodeless constraint agrees with the direct radial residual") {
    // q^2 (R''/R - V_eff + E) is constant for the bare ansatz and equals the
    // constraint with E from the energy formula.
    for (double b : {-3.0, -1.0, 0.0, 1.0, 2.5}) {
        for (double L : {0.0, 0.5, 1.0, 2.0}) {
            const PotentialParams p{1.3, b, 0.7};
            const auto e = exponents(p);
            const double E = energy_unconfined(e, 0);
            auto R = [&](long double q) { return oracle::ansatz(q, e.alpha, e.beta, e.delta); };
            for (double q : {0.9, 1.4, 2.2}) {
                const long double res = oracle::radial_residual(R, p.a, p.b, p.c, L * (L + 1), E, q);
                const double p_direct = static_cast<double>(-q * q * res / R(q));
                CHECK(p_direct == Approx(k0_constraint_residual(p, L)).epsilon(1e-8).scale(1.0));
            }
        }
    }
}

TEST_CASE("one-node coefficient") {
    CHECK(k1_coefficient({1, 0, 1}, 0.0) == Approx(3.2).epsilon(1e-15));
    CHECK(k1_coefficient({1, 0, 1}, 1.0) == Approx(16.0 / 13.0).epsilon(1e-15));
    CHECK_THROWS_AS(k1_coefficient({1, 1, 1}, 0.0), DegenerateError);
}

TEST_CASE("one-node constraint") {
    CHECK(k1_constraint_residual({1, 0, 1}, 0.0) == Approx(-19.55).epsilon(1e-14));
    const double hi = oracle::quartic_root(1.0, 2.0);
    const double lo = oracle::quartic_root(-10.0, -9.5);
    CHECK(std::abs(k1_constraint_residual({1, hi, 1}, 0.0)) < 1e-12);
    CHECK(std::abs(k1_constraint_residual({1, lo, 1}, 0.0)) < 1e-12);
}

TEST_CASE("one-node constraint matches hand coefficient matching") {
    for (double b : {-7.0, -2.0, 0.5, 3.0}) {
        for (double L : {0.0, 1.0, 2.5}) {
            const PotentialParams p{0.8, b, 1.7};
            const double ref = oracle::one_node_residual(b, p.c, L * (L + 1), -std::sqrt(p.a));
            CHECK(k1_constraint_residual(p, L) == Approx(-ref).epsilon(1e-11));
        }
    }
}

TEST_CASE("two-node coefficients") {
    const auto f = k2_coefficients({1, 0, 1}, 0.0);
    REQUIRE(f.degree_k == 2);
    REQUIRE(f.g.has_value());
    CHECK(*f.g == Approx(3.2).epsilon(1e-15));
    CHECK(f.coeffs[1] == Approx(-32.0 / 129.4).epsilon(1e-14));
    CHECK(f.coeffs[1] == Approx(-0.247295).epsilon(1e-6));
    CHECK(f.coeffs[0] == Approx(-0.791345).epsilon(1e-6));
    CHECK(f.coeffs[0] == *f.g * f.coeffs[1]);
    CHECK_THROWS_AS(k2_coefficients({1, 1, 1}, 0.0), DegenerateError);
}

TEST_CASE("two-node coefficients match hand coefficient matching") {
    for (double b : {-9.0, -1.0, 0.0, 2.0, 5.0}) {
        for (double L : {0.0, 0.5, 3.0}) {
            const PotentialParams p{1.2, b, 0.9};
            const auto m = oracle::two_node_matching(p.a, b, p.c, L * (L + 1), -std::sqrt(p.a));
            const auto f = k2_coefficients(p, L);
            CHECK(f.coeffs[1] == Approx(m.B).epsilon(1e-11));
            CHECK(f.coeffs[0] == Approx(m.C).epsilon(1e-11));
            CHECK(k2_constraint_residual(p, L) == Approx(m.residual).epsilon(1e-11));
        }
    }
}

TEST_CASE("two-node constraint") {
    CHECK(k2_constraint_residual({1, 0, 1}, 0.0) == Approx(21.76082).epsilon(1e-6));
    CHECK(std::abs(k2_constraint_residual({1, -14.265309, 1}, 0.0)) < 1e-5);

    // Independent root of the hand-matched residual lands on the six printed
    // decimals.
    auto r = [](double b) { return oracle::two_node_matching(1, b, 1, 0, -1).residual; };
    const double hi = oracle::bisect(r, 2.24, 2.29);
    const double lo = oracle::bisect(r, -14.3, -14.2);
    CHECK(hi == Approx(2.265309).epsilon(1e-6).scale(1.0));
    CHECK(lo == Approx(-14.265309).epsilon(1e-6).scale(1.0));
    CHECK(std::abs(k2_constraint_residual({1, hi, 1}, 0.0)) < 1e-9);
    CHECK(std::abs(k2_constraint_residual({1, lo, 1}, 0.0)) < 1e-9);

    // The residual is steep near the upper root, so the six-decimal value
    // 2.265309 leaves a residual of slope * (2.265309 - root), about -2.5e-4.
    const double slope = (r(hi + 1e-6) - r(hi - 1e-6)) / 2e-6;
    CHECK(k2_constraint_residual({1, 2.265309, 1}, 0.0) ==
          Approx(slope * (2.265309 - hi)).epsilon(1e-3));
    CHECK(k2_constraint_residual({1, 2.265309, 1}, 0.0) == Approx(-2.5358e-4).epsilon(1e-3));
}

TEST_CASE("unconfined dispatch") {
    CHECK(unconfined_prefactor({1, 0, 1}, 0.0, 0).coeffs.empty());
    CHECK(unconfined_constraint_residual({1, 0, 1}, 0.0, 1) == k1_constraint_residual({1, 0, 1}, 0.0));
    CHECK_THROWS_AS(unconfined_prefactor({1, 0, 1}, 0.0, 3), DomainError);
    const auto s = make_unconfined_solution({1, 1, 1}, {3, 0, 0});
    CHECK(s.energy == 5.0);
    CHECK_FALSE(s.confined());
}

TEST_CASE("wavefunction evaluation") {
    QesSolution s = make_unconfined_solution({1, 1, 1}, {3, 0, 0});
    CHECK(eval_wavefunction(s, 1.0) == Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(eval_wavefunction(s, 1e-3) == 0.0);
    CHECK_THROWS_AS(eval_wavefunction(s, 0.0), DomainError);
    CHECK_THROWS_AS(eval_wavefunction(s, -1.0), DomainError);

    s.channel.k = 1;
    s.prefactor = {1, {-4.0}, std::nullopt};
    CHECK(eval_wavefunction(s, 2.0) == 0.0);
    CHECK(eval_wavefunction(s, 1.9) < 0.0);
    CHECK(eval_wavefunction(s, 2.1) > 0.0);

    s.box_radius = 2.0;
    CHECK_THROWS_AS(eval_wavefunction(s, 1.0), DomainError);
}

TEST_CASE("constraint-satisfying wavefunctions solve the radial equation") {
    std::vector<QesSolution> cases;
    cases.push_back(make_unconfined_solution({1, 1, 1}, {3, 0, 0}));
    cases.push_back(make_unconfined_solution({1, -2 + 2 * std::sqrt(2.0), 1}, {2, 0, 0}));
    cases.push_back(make_unconfined_solution({1, oracle::quartic_root(1, 2), 1}, {3, 0, 1}));
    cases.push_back(make_unconfined_solution({1, oracle::quartic_root(-10, -9.5), 1}, {3, 0, 1}));
    auto r = [](double b) { return oracle::two_node_matching(1, b, 1, 0, -1).residual; };
    cases.push_back(make_unconfined_solution({1, oracle::bisect(r, 2.24, 2.29), 1}, {3, 0, 2}));
    cases.push_back(make_unconfined_solution({1, oracle::bisect(r, -14.3, -14.2), 1}, {3, 0, 2}));
    for (const auto& s : cases) {
        CAPTURE(s.params.b);
        CAPTURE(s.channel.k);
        CHECK(pointwise_residual(s, 0.25, 6.0) <= 1e-8);
    }

    auto bad = cases[0];
    bad.energy *= 1.01;
    CHECK(pointwise_residual(bad, 0.25, 6.0) > 1e-3);
}

TEST_CASE("node count of constraint-satisfying solutions") {
    const auto s1 = make_unconfined_solution({1, oracle::quartic_root(1, 2), 1}, {3, 0, 1});
    REQUIRE(s1.prefactor.coeffs[0] < 0.0);
    int changes = 0;
    double prev = eval_wavefunction(s1, 0.2);
    for (int i = 1; i <= 2000; ++i) {
        const double v = eval_wavefunction(s1, 0.2 + i * 0.004);
        if (v != 0.0 && prev != 0.0 && (v < 0) != (prev < 0)) ++changes;
        if (v != 0.0) prev = v;
    }
    CHECK(changes == 1);

    auto r = [](double b) { return oracle::two_node_matching(1, b, 1, 0, -1).residual; };
    const auto s2 = make_unconfined_solution({1, oracle::bisect(r, 2.24, 2.29), 1}, {3, 0, 2});
    changes = 0;
    prev = eval_wavefunction(s2, 0.2);
    for (int i = 1; i <= 2000; ++i) {
        const double v = eval_wavefunction(s2, 0.2 + i * 0.004);
        if (v != 0.0 && prev != 0.0 && (v < 0) != (prev < 0)) ++changes;
        if (v != 0.0) prev = v;
    }
    CHECK(changes == 2);
}
