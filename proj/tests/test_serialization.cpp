#include <cmath>
#include <random>

#include "doctest.h"
#include "qes/closed_form.hpp"
#include "qes/confined.hpp"
#include "qes/errors.hpp"
#include "qes/scan.hpp"
#include "qes/serialization.hpp"
#include "qes/verify.hpp"

using namespace qes;

TEST_CASE("15 significant digits") {
    CHECK(round_sig15(0.1) == 0.1);
    CHECK(round_sig15(1.0 / 3.0) == 0.333333333333333);
    CHECK(round_sig15(-2.2653093770974488) == -2.26530937709745);
    CHECK(round_sig15(0.0) == 0.0);
    CHECK(std::isinf(round_sig15(INFINITY)));
}

TEST_CASE("solution round trip is stable after one rounding") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int i = 0; i < 200; ++i) {
        QesSolution s;
        s.params = {std::abs(u(rng)) + 0.1, u(rng), std::abs(u(rng)) + 0.1};
        s.channel = {2 + i % 4, i % 3, i % 3};
        s.exponents = exponents(s.params);
        s.prefactor = {2, {u(rng), u(rng)}, u(rng)};
        s.energy = u(rng);
        if (i % 2) s.box_radius = std::abs(u(rng)) + 0.5;
        const json once = s;
        const auto back = once.get<QesSolution>();
        const json twice = back;
        CHECK(once.dump() == twice.dump());
        CHECK(back.channel == s.channel);
        CHECK(back.box_radius.has_value() == s.box_radius.has_value());
        CHECK(std::abs(back.energy - s.energy) <= 1e-14 * std::abs(s.energy));
    }
}

TEST_CASE("field order is fixed") {
    const json j = make_unconfined_solution({1, 1, 1}, {3, 0, 0});
    CHECK(j.dump() ==
          R"({"params":{"a":1.0,"b":1.0,"c":1.0},"channel":{"dim":3,"l":0,"k":0,"L":0.0},)"
          R"("exponents":{"alpha":-1.0,"beta":-1.0,"delta":2.0},)"
          R"("prefactor":{"degree_k":0,"coeffs":[],"g":null},"energy":5.0,"box_radius":null})");
}

TEST_CASE("scan request round trip") {
    ScanRequest r;
    r.l_list = {0, 2};
    r.k = 1;
    r.confined = true;
    r.alpha_sign = AlphaSign::both;
    r.config.bracket_steps = 100;
    const json j = r;
    CHECK(j.at("alpha_sign") == "both");
    const auto back = j.get<ScanRequest>();
    CHECK(back.l_list == r.l_list);
    CHECK(back.alpha_sign == AlphaSign::both);
    CHECK(back.config == r.config);

    json bad = j;
    bad["alpha_sign"] = 0;
    CHECK_THROWS_AS(bad.get<ScanRequest>(), DomainError);
}

TEST_CASE("partial solver config keeps defaults") {
    const auto c = json::parse(R"({"grid_points": 5000})").get<SolverConfig>();
    CHECK(c.grid_points == 5000);
    CHECK(c.energy_tol == SolverConfig{}.energy_tol);
}

TEST_CASE("report serializes NaN as null") {
    VerificationReport r;
    r.e_closed = NAN;
    const json j = r;
    CHECK(j.at("e_closed").is_null());
    CHECK(j.at("status") == "skipped");
    CHECK(j.at("method") == "shooting");
}

TEST_CASE("scan result carries diagnostics") {
    ScanRequest r;
    r.k = 1;
    r.confined = true;
    const json j = scan_b(r);
    CHECK(j.at("solutions").size() == 2);
    CHECK(j.at("diagnostics").at("cells_scanned").get<int>() >= 4096);
    CHECK(j.at("diagnostics").contains("rejected"));
}
