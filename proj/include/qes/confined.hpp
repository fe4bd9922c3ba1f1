#pragma once

#include <vector>

#include "qes/closed_form.hpp"
#include "qes/model.hpp"

namespace qes {

/// alpha = sign * sqrt(a); sign must be +1 or -1.
AnsatzExponents exponents_confined(const PotentialParams& params, int sign);

/// E = -alpha (5 + 4k + 2 delta).
double energy_confined(const AnsatzExponents& exp, int k);

Denominator k0_box_radius_denominator(const PotentialParams& params, double L, double alpha);

/// Squared box radius of the nodeless confined solution. May be negative.
double k0_box_radius(const PotentialParams& params, double L, double alpha);

/// alpha minus the value alpha must take for a nodeless confined solution
/// in a box of squared radius R2.
double k0_alpha_constraint_residual(const PotentialParams& params, double L, double R2,
                                    double alpha);

struct K1ConfinedResiduals {
    double r_a1 = 0.0;
    double r_R2 = 0.0;
    double r_alpha = 0.0;
};

/// Residuals of the three coupled relations for the one-node confined
/// solution F(q) = q^2 + a1 in a box of squared radius R2.
K1ConfinedResiduals k1_confined_residuals(const PotentialParams& params, double L, double alpha,
                                          double a1, double R2);

/// (R2, a1) pair satisfying the a1 and R2 relations for fixed (b, alpha).
struct K1ConfinedCandidate {
    double R2 = 0.0;
    double a1 = 0.0;
};

/// Both branches of the quadratic in R2 obtained by eliminating a1; index 0
/// is the "+" root, index 1 the "-" root. Empty when the roots are complex or
/// the system degenerates.
std::vector<K1ConfinedCandidate> k1_confined_candidates(const PotentialParams& params, double L,
                                                        double alpha);

/// Builds a confined record. a1 is ignored for k = 0. Throws DomainError if
/// R2 <= 0 or k > 1.
QesSolution make_confined_solution(const PotentialParams& params, const Channel& channel, int sign,
                                   double R2, double a1 = 0.0);

/// (R^2 - q^2) F(q) exp(alpha q^2/2 + beta q^-2/2 + delta ln q) on (0, R].
double eval_confined_wavefunction(const QesSolution& sol, double q);

/// Absorbs the boundary factor into the prefactor, giving the unconfined
/// solution with k + 1 nodes and the same energy.
QesSolution map_confined_to_unconfined(const QesSolution& sol);

}  // namespace qes
