#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qes/closed_form.hpp"
#include "qes/confined.hpp"
#include "qes/errors.hpp"
#include "qes/scan.hpp"
#include "qes/verify.hpp"

using namespace qes;
using doctest::Approx;

namespace {

const SolverConfig kCfg{};

QesSolution printed_confined(double near_b) {
    ScanRequest req;
    req.k = 1;
    req.confined = true;
    for (const auto& s : scan_b(req).solutions) {
        if (std::abs(s.params.b - near_b) < 1e-3) return s;
    }
    FAIL("set not found");
    return {};
}

double rel(double x, double y) { return std::abs(x - y) / (1 + std::abs(y)); }

}  // namespace

TEST_CASE("shooting reproduces the nodeless closed form") {
    CHECK(rel(shoot_eigenvalue({1, 1, 1}, 0.0, 0, std::nullopt, kCfg), 5.0) <= 1e-6);
}

TEST_CASE("shooting reproduces the confined one-node closed form") {
    const auto s = printed_confined(2.265309);
    const double e = shoot_eigenvalue(s.params, 0.0, 1, s.box_radius, kCfg);
    CHECK(e == Approx(14.265309).epsilon(1e-4).scale(1.0));
    CHECK(rel(e, s.energy) <= 1e-6);
}

TEST_CASE("shooting at the printed six-decimal b with the jointly solved box") {
    const PotentialParams p{1, 2.265309, 1};
    const auto cands = k1_confined_candidates(p, 0.0, -1.0);
    const auto it = std::find_if(cands.begin(), cands.end(),
                                 [](const auto& c) { return c.R2 > 0 && -c.a1 > 0 && -c.a1 < c.R2; });
    REQUIRE(it != cands.end());
    const double e = shoot_eigenvalue(p, 0.0, 1, std::sqrt(it->R2), kCfg);
    CHECK(e == Approx(14.265309).epsilon(1e-4).scale(1.0));
}

TEST_CASE("shooting and finite differences agree without a closed form") {
    const double es = shoot_eigenvalue({1, 0, 1}, 0.0, 0, std::nullopt, kCfg);
    const double ef = fd_eigenvalue({1, 0, 1}, 0.0, 0, std::nullopt, kCfg);
    CHECK(es > 0.0);
    CHECK(rel(ef, es) <= 1e-5);
}

TEST_CASE("finite differences reproduce the nodeless closed form") {
    CHECK(rel(fd_eigenvalue({1, 1, 1}, 0.0, 0, std::nullopt, kCfg), 5.0) <= 1e-5);
}

TEST_CASE("excited states follow the node ladder") {
    const double e0 = shoot_eigenvalue({1, 1, 1}, 0.0, 0, std::nullopt, kCfg);
    const double e1 = shoot_eigenvalue({1, 1, 1}, 0.0, 1, std::nullopt, kCfg);
    const double e2 = shoot_eigenvalue({1, 1, 1}, 0.0, 2, std::nullopt, kCfg);
    CHECK(e0 < e1);
    CHECK(e1 < e2);
    CHECK(rel(fd_eigenvalue({1, 1, 1}, 0.0, 2, std::nullopt, kCfg), e2) <= 1e-5);
}

TEST_CASE("eigenstate samples carry k nodes") {
    const auto st = shoot_eigenstate({1, 1, 1}, 0.0, 2, std::nullopt, kCfg);
    REQUIRE(st.samples.size() > 10);
    CHECK(count_nodes(std::span(st.samples).subspan(1, st.samples.size() - 2)) == 2);
}

TEST_CASE("Sturm count") {
    // Positive-definite confined operator: nothing below zero.
    const auto d = radial_domain({1, 1, 1}, 0.0, 9.0, 2.0, kCfg);
    const int n = 500;
    const double h = (d.q_max - d.q_min) / (n + 1);
    std::vector<double> diag(n), off(n - 1, -1 / (h * h));
    for (int i = 0; i < n; ++i) {
        const double q = d.q_min + (i + 1) * h;
        diag[i] = 2 / (h * h) + PotentialParams{1, 1, 1}.potential(q);
    }
    CHECK(sturm_count(diag, off, 0.0) == 0);

    // [[2, -1], [-1, 2]] has eigenvalues 1 and 3.
    const std::vector<double> d2{2, 2}, o2{-1};
    CHECK(sturm_count(d2, o2, 0.5) == 0);
    CHECK(sturm_count(d2, o2, 2.0) == 1);
    CHECK(sturm_count(d2, o2, 3.5) == 2);
}

TEST_CASE("residual norm") {
    const auto s = make_unconfined_solution({1, 1, 1}, {3, 0, 0});
    CHECK(ode_residual_norm(s, kCfg) <= 1e-8);
    auto bad = s;
    bad.energy += 0.1;
    CHECK(ode_residual_norm(bad, kCfg) >= 1e-3);
    CHECK(ode_residual_norm(printed_confined(2.265309), kCfg) <= 1e-8);
    CHECK(ode_residual_norm(printed_confined(-14.265309), kCfg) <= 1e-8);
}

TEST_CASE("count_nodes") {
    const auto s0 = make_unconfined_solution({1, 1, 1}, {3, 0, 0});
    const auto g = sample_wavefunction(s0, 200, kCfg);
    CHECK(count_nodes(std::span(g).subspan(1, g.size() - 2)) == 0);

    auto s1 = make_unconfined_solution({1, 1, 1}, {3, 0, 0});
    s1.channel.k = 1;
    s1.prefactor = {1, {-4.0}, std::nullopt};
    std::vector<WavefunctionSample> across;
    for (double q : {1.5, 1.8, 1.99, 2.0, 2.01, 2.5}) across.push_back({q, eval_wavefunction(s1, q)});
    CHECK(count_nodes(across) == 1);

    const std::vector<WavefunctionSample> positive{{1, 1}, {2, 3}, {3, 0.5}};
    CHECK(count_nodes(positive) == 0);
    const std::vector<WavefunctionSample> tiny{{1, 1}, {2, -1e-300}, {3, 1}};
    CHECK(count_nodes(tiny) == 0);
    CHECK(count_nodes(std::span<const WavefunctionSample>{}) == 0);
}

TEST_CASE("sample_wavefunction") {
    const auto s = printed_confined(2.265309);
    const auto g = sample_wavefunction(s, 2, kCfg);
    REQUIRE(g.size() == 2);
    CHECK(g[1].q == *s.box_radius);
    CHECK(g[1].value == 0.0);
    CHECK_THROWS_AS(sample_wavefunction(s, 1, kCfg), DomainError);
}

TEST_CASE("verify_solution") {
    const auto r = verify_solution(make_unconfined_solution({1, 1, 1}, {3, 0, 0}), Method::shooting, kCfg);
    CHECK(r.status == Status::pass);
    CHECK(r.node_count == 0);
    CHECK(r.rel_error <= 1e-6);
    CHECK(r.rel_error == Approx(std::abs(r.e_closed - r.e_numeric) / (1 + std::abs(r.e_closed))));

    const auto c = verify_solution(printed_confined(-14.265309), Method::fd_matrix, kCfg);
    CHECK(c.status == Status::pass);
    CHECK(c.node_count == 1);

    // A non-solution fails the energy comparison.
    auto wrong = make_unconfined_solution({1, 0, 1}, {3, 0, 0});
    CHECK(verify_solution(wrong, Method::shooting, kCfg).status == Status::fail);
}

TEST_CASE("verify_numeric") {
    const auto r = verify_numeric({1, 0, 1}, {3, 0, 0}, std::nullopt, Method::shooting, kCfg);
    CHECK(r.status == Status::skipped);
    CHECK(std::isnan(r.e_closed));
    CHECK(r.e_numeric > 0.0);
    const auto p = verify_numeric({1, 1, 1}, {3, 0, 0}, std::nullopt, Method::fd_matrix, kCfg, 5.0);
    CHECK(p.status == Status::pass);
}

TEST_CASE("interdimensional degeneracy") {
    CHECK(degeneracy_check({1, 1, 1}, 3, 1, 0, kCfg).status == Status::pass);
    CHECK(degeneracy_check({1, 1, 1}, 2, 1, 0, kCfg).status == Status::pass);
    CHECK(degeneracy_check({1, 1, 1}, 3, 1, 0, kCfg).rel_error <= 1e-6);
    CHECK_THROWS_AS(degeneracy_check({1, 1, 1}, 3, 0, 0, kCfg), DomainError);
}

TEST_CASE("Dirichlet energies decrease as the box grows") {
    const PotentialParams p{1, 1, 1};
    double prev = shoot_eigenvalue(p, 0.0, 0, 1.0, kCfg);
    for (double r : {1.2, 1.5, 2.0, 3.0, 5.0}) {
        const double e = shoot_eigenvalue(p, 0.0, 0, r, kCfg);
        CHECK(e <= prev);
        prev = e;
    }
    CHECK(rel(prev, 5.0) <= 1e-6);
}

TEST_CASE("solver errors") {
    CHECK_THROWS_AS(shoot_eigenvalue({1, 1, 1}, 0.0, 0, 1e-3, kCfg), GridError);
    CHECK_THROWS_AS(shoot_eigenvalue({1, 1, 1}, 0.0, -1, std::nullopt, kCfg), DomainError);
    SolverConfig tight = kCfg;
    tight.energy_tol = 1e-14;
    tight.grid_points = 100;
    CHECK_THROWS_AS(fd_eigenvalue({1, 1, 1}, 0.0, 0, std::nullopt, tight), ResolutionError);
}
