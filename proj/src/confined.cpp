#include "qes/confined.hpp"

#include <cmath>

#include "qes/errors.hpp"

namespace qes {

namespace {

double l_l1(double L) { return L * (L + 1.0); }

// -8c^2 alpha - 3c^{3/2} - 4cb - b^2 sqrt(c) + 4L(L+1)c^{3/2}
Denominator bracket_term(const PotentialParams& p, double L, double alpha) {
    const double sc = std::sqrt(p.c), c32 = p.c * sc;
    const double t1 = 4.0 * l_l1(L) * c32;
    const double t2 = 8.0 * p.c * p.c * alpha;
    const double t3 = p.b * p.b * sc;
    const double t4 = 4.0 * p.c * p.b;
    const double t5 = 3.0 * c32;
    return {t1 - t2 - t3 - t4 - t5,
            std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4) + std::abs(t5)};
}

// 35c^{3/2} + 12cb + b^2 sqrt(c) - 4L(L+1)c^{3/2}
double k_term(const PotentialParams& p, double L) {
    const double sc = std::sqrt(p.c), c32 = p.c * sc;
    return 35.0 * c32 + 12.0 * p.c * p.b + p.b * p.b * sc - 4.0 * l_l1(L) * c32;
}

}  // namespace

AnsatzExponents exponents_confined(const PotentialParams& params, int sign) {
    if (sign != 1 && sign != -1) {
        throw DomainError("alpha sign must be +1 or -1");
    }
    auto e = exponents(params);
    e.alpha = sign * std::sqrt(params.a);
    return e;
}

double energy_confined(const AnsatzExponents& exp, int k) {
    if (k < 0) {
        throw DomainError("node count must be >= 0");
    }
    return -exp.alpha * ((5.0 + 4.0 * k) + 2.0 * exp.delta);
}

Denominator k0_box_radius_denominator(const PotentialParams& params, double L, double alpha) {
    params.validate();
    return bracket_term(params, L, alpha);
}

double k0_box_radius(const PotentialParams& params, double L, double alpha) {
    const double c = params.c;
    return checked_divide(-16.0 * c * c, k0_box_radius_denominator(params, L, alpha),
                          "confined k = 0 box radius");
}

double k0_alpha_constraint_residual(const PotentialParams& params, double L, double R2,
                                    double alpha) {
    params.validate();
    const PotentialParams& p = params;
    const double sc = std::sqrt(p.c), c32 = p.c * sc;
    const double numerator =
        -p.b * p.b * sc - 12.0 * p.c * p.b - 35.0 * c32 + 4.0 * l_l1(L) * c32;
    const Denominator den{8.0 * (2.0 * R2 * c32 + p.c * p.c),
                          8.0 * (2.0 * std::abs(R2) * c32 + p.c * p.c)};
    return alpha - checked_divide(numerator, den, "confined k = 0 alpha constraint");
}

K1ConfinedResiduals k1_confined_residuals(const PotentialParams& params, double L, double alpha,
                                          double a1, double R2) {
    params.validate();
    const PotentialParams& p = params;
    const double c = p.c, c2 = c * c, sc = std::sqrt(c), c32 = c * sc;
    const double ll = l_l1(L);

    const Denominator w = bracket_term(p, L, alpha);
    const Denominator den22{16.0 * c2 + R2 * w.value, 16.0 * c2 + std::abs(R2) * w.scale};
    const double rhs22 = checked_divide(16.0 * c2 * R2, den22, "confined k = 1 a1 relation");

    const double num23 = 16.0 * a1 * c32 * alpha - 99.0 * c32 - 20.0 * c * p.b + 4.0 * ll * c32 -
                         8.0 * c2 * alpha - p.b * p.b * sc;
    const Denominator den23{16.0 * c32 * alpha, 16.0 * c32 * std::sqrt(p.a)};
    const double rhs23 = checked_divide(num23, den23, "confined k = 1 R2 relation");

    // The c^2 term of the denominator carries R^2; without it the relation is
    // not homogeneous in length.
    const double kt = k_term(p, L);
    const double num24 = -32.0 * c2 - a1 * kt + R2 * kt;
    const double inner = a1 * (c2 + 4.0 * R2 * c32) - c2 * R2;
    const double inner_scale = std::abs(a1) * (c2 + 4.0 * std::abs(R2) * c32) + c2 * std::abs(R2);
    const double rhs24 = checked_divide(num24, {8.0 * inner, 8.0 * inner_scale},
                                        "confined k = 1 alpha constraint");

    return {a1 - rhs22, R2 - rhs23, alpha - rhs24};
}

std::vector<K1ConfinedCandidate> k1_confined_candidates(const PotentialParams& params, double L,
                                                        double alpha) {
    params.validate();
    const PotentialParams& p = params;
    const double c = p.c, c2 = c * c, sc = std::sqrt(c), c32 = c * sc;
    if (alpha == 0.0) {
        return {};
    }
    // R2 = a1 + t from the R2 relation.
    const double t = (-99.0 * c32 - 20.0 * c * p.b + 4.0 * l_l1(L) * c32 - 8.0 * c2 * alpha -
                      p.b * p.b * sc) /
                     (16.0 * c32 * alpha);
    const Denominator w = bracket_term(p, L, alpha);
    if (w.degenerate()) {
        return {};
    }
    // (R2 - t)(16c^2 + R2 w) = 16 c^2 R2  =>  w R2^2 - t w R2 - 16 c^2 t = 0
    const double qa = w.value, qb = -t * w.value, qc = -16.0 * c2 * t;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (!(disc >= 0.0)) {
        return {};
    }
    const double s = std::sqrt(disc);
    double plus = 0.0, minus = 0.0;
    if (qb >= 0.0) {
        const double qq = -0.5 * (qb + s);
        minus = qq / qa;
        plus = qq != 0.0 ? qc / qq : 0.0;
    } else {
        const double qq = -0.5 * (qb - s);
        plus = qq / qa;
        minus = qq != 0.0 ? qc / qq : 0.0;
    }
    return {{plus, plus - t}, {minus, minus - t}};
}

QesSolution make_confined_solution(const PotentialParams& params, const Channel& channel, int sign,
                                   double R2, double a1) {
    channel.validate();
    if (channel.k > 1) {
        throw DomainError("confined closed forms exist for k <= 1 only");
    }
    if (!(R2 > 0.0) || !std::isfinite(R2)) {
        throw DomainError("squared box radius must be positive");
    }
    QesSolution sol;
    sol.params = params;
    sol.channel = channel;
    sol.exponents = exponents_confined(params, sign);
    sol.prefactor = channel.k == 0 ? PrefactorPoly{0, {}, std::nullopt}
                                   : PrefactorPoly{1, {a1}, std::nullopt};
    sol.energy = energy_confined(sol.exponents, channel.k);
    sol.box_radius = std::sqrt(R2);
    return sol;
}

double eval_confined_wavefunction(const QesSolution& sol, double q) {
    if (!sol.box_radius) {
        throw DomainError("eval_confined_wavefunction expects a confined solution");
    }
    const double r = *sol.box_radius;
    if (!(q > 0.0) || q > r) {
        throw DomainError("argument outside the box (0, R]");
    }
    if (q == r) {
        return 0.0;
    }
    const double env = envelope(sol.exponents, q);
    return env == 0.0 ? 0.0 : (r * r - q * q) * sol.prefactor(q) * env;
}

QesSolution map_confined_to_unconfined(const QesSolution& sol) {
    if (!sol.box_radius) {
        throw DomainError("mapping expects a confined solution");
    }
    if (sol.exponents.alpha > 0.0) {
        throw NotMappableError("alpha = +sqrt(a) is not normalizable on (0, inf)");
    }
    const double r2 = *sol.box_radius * *sol.box_radius;
    QesSolution out = sol;
    out.box_radius.reset();
    out.channel.k = sol.channel.k + 1;
    // (q^2 - R^2) F(q); the overall sign of the wavefunction is irrelevant.
    switch (sol.channel.k) {
        case 0:
            out.prefactor = {1, {-r2}, std::nullopt};
            break;
        case 1: {
            const double a1 = sol.prefactor.coeffs.at(0);
            const double a22 = a1 - r2;
            const double a21 = -a1 * r2;
            out.prefactor = {2, {a21, a22}, a21 / a22};
            break;
        }
        default:
            throw DomainError("mapping implemented for confined k <= 1");
    }
    out.energy = energy_unconfined(out.exponents, out.channel.k);
    return out;
}

}  // namespace qes
