#pragma once

#include "qes/model.hpp"

namespace qes {

/// A closed-form denominator together with the magnitude of the terms that
/// produced it; the ratio tells how much cancellation occurred.
struct Denominator {
    double value = 0.0;
    double scale = 0.0;

    /// |value| < 1e-12 * scale.
    bool degenerate() const;
};

/// Divides, throwing DegenerateError when the denominator is degenerate.
double checked_divide(double numerator, Denominator den, const char* what);

AnsatzExponents exponents(const PotentialParams& params);

/// E = -alpha (1 + 4k + 2 delta).
double energy_unconfined(const AnsatzExponents& exp, int k);

/// delta^2 - delta - 2 alpha beta - L(L+1); zero iff the nodeless
/// unconfined solution exists.
double k0_constraint_residual(const PotentialParams& params, double L);

/// 4L(L+1)c^{3/2} + 8c^2 sqrt(a) - b^2 sqrt(c) - 4cb - 3c^{3/2}, shared by
/// the k = 1 coefficient and the k = 2 ratio G.
Denominator k1_denominator(const PotentialParams& params, double L);

/// Constant term a_{1,L,1} of F(q) = q^2 + a_{1,L,1}.
double k1_coefficient(const PotentialParams& params, double L);

/// 4 alpha a_1 - (delta^2 + 3 delta + 2 - L(L+1) - 2 beta alpha).
double k1_constraint_residual(const PotentialParams& params, double L);

/// Denominator of a_{2,L,2}; throws DegenerateError if G itself is degenerate.
Denominator k2_denominator(const PotentialParams& params, double L);

/// F(q) = q^4 + a_{2,L,2} q^2 + a_{2,L,1}; coeffs = {a_{2,L,1}, a_{2,L,2}}, g = G.
PrefactorPoly k2_coefficients(const PotentialParams& params, double L);

/// 4 sqrt(a) a_{2,L,2} + delta^2 + 7 delta + 12 - L(L+1) - 2 sqrt(ac).
double k2_constraint_residual(const PotentialParams& params, double L);

/// Prefactor for node count k in {0, 1, 2}.
PrefactorPoly unconfined_prefactor(const PotentialParams& params, double L, int k);

/// Constraint residual for node count k in {0, 1, 2}.
double unconfined_constraint_residual(const PotentialParams& params, double L, int k);

/// Assembles the closed-form record; does not check the constraint.
QesSolution make_unconfined_solution(const PotentialParams& params, const Channel& channel);

/// alpha q^2/2 + beta q^-2/2 + delta ln q.
double log_envelope(const AnsatzExponents& exp, double q);

/// Exponential envelope, returning exact 0 once the exponent would underflow.
double envelope(const AnsatzExponents& exp, double q);

/// F(q) exp(alpha q^2/2 + beta q^-2/2 + delta ln q). Unnormalized.
double eval_wavefunction(const QesSolution& sol, double q);

}  // namespace qes
