#include "qes/model.hpp"

#include <cmath>
#include <string>

#include "qes/errors.hpp"

namespace qes {

void PotentialParams::validate() const {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
        throw DomainError("potential parameters must be finite");
    }
    if (!(a > 0.0)) {
        throw DomainError("potential parameter a must be positive, got " + std::to_string(a));
    }
    if (!(c > 0.0)) {
        throw DomainError("potential parameter c must be positive, got " + std::to_string(c));
    }
}

double PotentialParams::potential(double q) const {
    const double q2 = q * q;
    const double inv2 = 1.0 / q2;
    return a * q2 + inv2 * inv2 * (b + c * inv2);
}

EffectiveL effective_L(int dim, int l) {
    if (dim < 2) {
        throw DomainError("dimension must be >= 2, got " + std::to_string(dim));
    }
    if (l < 0) {
        throw DomainError("orbital quantum number must be >= 0, got " + std::to_string(l));
    }
    return EffectiveL::from_twice(2 * l + dim - 3);
}

void Channel::validate() const {
    (void)effective_L(dim, l);
    if (k < 0) {
        throw DomainError("node count k must be >= 0, got " + std::to_string(k));
    }
}

double PrefactorPoly::operator()(double q) const {
    const double q2 = q * q;
    double acc = 1.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * q2 + *it;
    }
    return acc;
}

void SolverConfig::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(q_min_factor) || !positive(q_max_factor)) {
        throw DomainError("grid extent factors must be positive");
    }
    if (grid_points < 100) {
        throw DomainError("grid_points must be >= 100");
    }
    if (!(energy_tol > 0.0 && energy_tol < 1.0) || !(residual_tol > 0.0 && residual_tol < 1.0)) {
        throw DomainError("tolerances must lie in (0, 1)");
    }
    if (!positive(bracket_range)) {
        throw DomainError("bracket_range must be positive");
    }
    if (bracket_steps < 1) {
        throw DomainError("bracket_steps must be >= 1");
    }
}

}  // namespace qes
