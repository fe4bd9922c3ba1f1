#include "qes/closed_form.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qes/errors.hpp"

namespace qes {

namespace {

double l_l1(double L) { return L * (L + 1.0); }

// Exponent below which exp() is treated as an exact zero.
const double kUnderflowExponent = std::log(std::numeric_limits<double>::min()) + 10.0;

}  // namespace

bool Denominator::degenerate() const {
    return !std::isfinite(value) || std::abs(value) < 1e-12 * scale;
}

double checked_divide(double numerator, Denominator den, const char* what) {
    if (den.degenerate()) {
        throw DegenerateError(std::string("degenerate denominator in ") + what);
    }
    return numerator / den.value;
}

AnsatzExponents exponents(const PotentialParams& params) {
    params.validate();
    const double sc = std::sqrt(params.c);
    return {-std::sqrt(params.a), -sc, 1.5 + params.b / (2.0 * sc)};
}

double energy_unconfined(const AnsatzExponents& exp, int k) {
    if (k < 0) {
        throw DomainError("node count must be >= 0");
    }
    return -exp.alpha * ((1.0 + 4.0 * k) + 2.0 * exp.delta);
}

double k0_constraint_residual(const PotentialParams& params, double L) {
    const auto e = exponents(params);
    return e.delta * e.delta - e.delta - 2.0 * e.alpha * e.beta - l_l1(L);
}

Denominator k1_denominator(const PotentialParams& params, double L) {
    params.validate();
    const double a = params.a, b = params.b, c = params.c;
    const double sa = std::sqrt(a), sc = std::sqrt(c), c32 = c * sc;
    const double t1 = 4.0 * l_l1(L) * c32;
    const double t2 = 8.0 * c * c * sa;
    const double t3 = b * b * sc;
    const double t4 = 4.0 * c * b;
    const double t5 = 3.0 * c32;
    return {t1 + t2 - t3 - t4 - t5,
            std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4) + std::abs(t5)};
}

double k1_coefficient(const PotentialParams& params, double L) {
    const double c = params.c;
    return checked_divide(16.0 * c * c, k1_denominator(params, L), "k = 1 coefficient");
}

double k1_constraint_residual(const PotentialParams& params, double L) {
    const auto e = exponents(params);
    const double a1 = k1_coefficient(params, L);
    const double d = e.delta;
    return 4.0 * e.alpha * a1 - (d * d + 3.0 * d + 2.0 - l_l1(L) - 2.0 * e.beta * e.alpha);
}

Denominator k2_denominator(const PotentialParams& params, double L) {
    const double a = params.a, b = params.b, c = params.c;
    const double c2 = c * c;
    const double g = checked_divide(16.0 * c2, k1_denominator(params, L), "k = 2 ratio G");
    const double sa = std::sqrt(a), sc = std::sqrt(c), c32 = c * sc;
    const double t1 = b * b * sc;
    const double t2 = 12.0 * c * b;
    const double t3 = 8.0 * c2 * sa;
    const double t4 = (35.0 + 32.0 * g * sa - 4.0 * l_l1(L)) * c32;
    const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3) +
                         (35.0 + 32.0 * std::abs(g) * sa + 4.0 * std::abs(l_l1(L))) * c32;
    return {t1 + t2 - t3 + t4, scale};
}

PrefactorPoly k2_coefficients(const PotentialParams& params, double L) {
    const double c = params.c;
    const double g = k1_coefficient(params, L);  // G has the k = 1 coefficient's form
    const double a22 = checked_divide(-32.0 * c * c, k2_denominator(params, L), "k = 2 coefficient");
    return {2, {g * a22, a22}, g};
}

double k2_constraint_residual(const PotentialParams& params, double L) {
    const auto e = exponents(params);
    const double a22 = k2_coefficients(params, L).coeffs[1];
    const double d = e.delta;
    return 4.0 * std::sqrt(params.a) * a22 + d * d + 7.0 * d + 12.0 - l_l1(L) -
           2.0 * std::sqrt(params.a * params.c);
}

PrefactorPoly unconfined_prefactor(const PotentialParams& params, double L, int k) {
    switch (k) {
        case 0: return {0, {}, std::nullopt};
        case 1: return {1, {k1_coefficient(params, L)}, std::nullopt};
        case 2: return k2_coefficients(params, L);
        default: throw DomainError("unconfined closed forms exist for k <= 2 only");
    }
}

double unconfined_constraint_residual(const PotentialParams& params, double L, int k) {
    switch (k) {
        case 0: return k0_constraint_residual(params, L);
        case 1: return k1_constraint_residual(params, L);
        case 2: return k2_constraint_residual(params, L);
        default: throw DomainError("unconfined closed forms exist for k <= 2 only");
    }
}

QesSolution make_unconfined_solution(const PotentialParams& params, const Channel& channel) {
    channel.validate();
    QesSolution sol;
    sol.params = params;
    sol.channel = channel;
    sol.exponents = exponents(params);
    sol.prefactor = unconfined_prefactor(params, channel.L().value(), channel.k);
    sol.energy = energy_unconfined(sol.exponents, channel.k);
    return sol;
}

double log_envelope(const AnsatzExponents& exp, double q) {
    const double q2 = q * q;
    return 0.5 * exp.alpha * q2 + 0.5 * exp.beta / q2 + exp.delta * std::log(q);
}

double envelope(const AnsatzExponents& exp, double q) {
    const double s = log_envelope(exp, q);
    return s < kUnderflowExponent ? 0.0 : std::exp(s);
}

double eval_wavefunction(const QesSolution& sol, double q) {
    if (!(q > 0.0)) {
        throw DomainError("wavefunction argument must be positive");
    }
    if (sol.confined()) {
        throw DomainError("eval_wavefunction expects an unconfined solution");
    }
    const double env = envelope(sol.exponents, q);
    return env == 0.0 ? 0.0 : sol.prefactor(q) * env;
}

}  // namespace qes
