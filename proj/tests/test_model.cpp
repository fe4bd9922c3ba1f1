#include <cmath>

#include "doctest.h"
#include "qes/errors.hpp"
#include "qes/model.hpp"

using namespace qes;

TEST_CASE("effective L from dimension and orbital number") {
    CHECK(effective_L(3, 0).value() == 0.0);
    CHECK(effective_L(2, 1).value() == 0.5);
    CHECK(effective_L(5, 2).value() == 3.0);
    CHECK(effective_L(2, 0).value() == -0.5);
    CHECK(effective_L(2, 0).l_l1() == -0.25);
}

TEST_CASE("effective L rejects dim < 2 and negative l") {
    CHECK_THROWS_AS(effective_L(1, 0), DomainError);
    CHECK_THROWS_AS(effective_L(3, -1), DomainError);
}

TEST_CASE("(D, l) and (D + 2, l - 1) share L") {
    for (int d = 2; d < 12; ++d) {
        for (int l = 1; l < 8; ++l) {
            CHECK(effective_L(d, l) == effective_L(d + 2, l - 1));
        }
    }
}

TEST_CASE("L(L+1) is never below -1/4") {
    for (int d = 2; d < 10; ++d) {
        for (int l = 0; l < 6; ++l) {
            CHECK(effective_L(d, l).l_l1() >= -0.25);
        }
    }
}

TEST_CASE("potential parameters") {
    CHECK_NOTHROW(PotentialParams{1, -14, 1}.validate());
    CHECK_THROWS_AS((PotentialParams{0, 1, 1}.validate()), DomainError);
    CHECK_THROWS_AS((PotentialParams{1, 1, -1}.validate()), DomainError);
    CHECK_THROWS_AS((PotentialParams{1, std::nan(""), 1}.validate()), DomainError);
    CHECK(PotentialParams{2, 3, 4}.potential(1.0) == 9.0);
    CHECK(PotentialParams{1, 1, 1}.potential(2.0) == doctest::Approx(4.0 + 1.0 / 16 + 1.0 / 64));
}

TEST_CASE("channel validation") {
    CHECK_NOTHROW(Channel{2, 0, 2}.validate());
    CHECK_THROWS_AS((Channel{3, 0, -1}.validate()), DomainError);
    CHECK_THROWS_AS((Channel{1, 0, 0}.validate()), DomainError);
    CHECK(Channel{4, 2, 0}.L().twice() == 5);
}

TEST_CASE("prefactor is a polynomial in q^2") {
    PrefactorPoly f0{0, {}, std::nullopt};
    CHECK(f0(3.0) == 1.0);
    PrefactorPoly f1{1, {-4.0}, std::nullopt};
    CHECK(f1(2.0) == 0.0);
    CHECK(f1(3.0) == 5.0);
    PrefactorPoly f2{2, {6.0, -5.0}, std::nullopt};
    CHECK(f2(std::sqrt(2.0)) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(f2(std::sqrt(3.0)) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(f2(1.0) == 2.0);
}

TEST_CASE("solver config validation") {
    SolverConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.grid_points = 50;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = {};
    cfg.energy_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = {};
    cfg.bracket_steps = 0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
}
