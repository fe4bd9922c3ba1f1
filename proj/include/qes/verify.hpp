#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qes/model.hpp"

namespace qes {

enum class Method { shooting, fd_matrix };
enum class Status { pass, fail, skipped };

struct VerificationReport {
    double e_closed = 0.0;
    double e_numeric = 0.0;
    double rel_error = 0.0;
    double residual_norm = 0.0;
    int node_count = 0;
    Method method = Method::shooting;
    Status status = Status::skipped;
    std::string notes;
};

/// Radial interval used by the numerical solvers: [q_min, q_max] with q_max
/// the box radius when confined.
struct RadialDomain {
    double q_min = 0.0;
    double q_max = 0.0;
};

/// q_min puts the q^-2 exponent at -40 (times q_min_factor); unconfined
/// q_max leaves a Gaussian decay of e^-40 past the outer turning point of
/// energy_hint (times q_max_factor).
RadialDomain radial_domain(const PotentialParams& params, double L, double energy_hint,
                           std::optional<double> box, const SolverConfig& config);

/// Eigenvalue of the radial equation with exactly k interior nodes, by
/// Numerov shooting on a logarithmic grid.
double shoot_eigenvalue(const PotentialParams& params, double L, int k, std::optional<double> box,
                        const SolverConfig& config);

struct NumericalState {
    double energy = 0.0;
    std::vector<WavefunctionSample> samples;
};

/// As shoot_eigenvalue, also returning the matched (unnormalized) solution.
NumericalState shoot_eigenstate(const PotentialParams& params, double L, int k,
                                std::optional<double> box, const SolverConfig& config);

/// Number of eigenvalues below `shift` of the symmetric tridiagonal matrix
/// with the given diagonal and off-diagonal (off.size() == diag.size() - 1).
int sturm_count(std::span<const double> diag, std::span<const double> off, double shift);

/// (k+1)-th eigenvalue of the three-point finite-difference operator,
/// Richardson-extrapolated over two grids.
double fd_eigenvalue(const PotentialParams& params, double L, int k, std::optional<double> box,
                     const SolverConfig& config);

/// Unnormalized closed-form wavefunction without domain checks (analytic
/// continuation past the box wall is allowed).
double closed_form_value(const QesSolution& sol, double q);

/// max |-R'' + (L(L+1)/q^2 + V - E) R| / ((|E| + 1) max|R|) over the solver
/// domain, with R'' from five-point central differences.
double ode_residual_norm(const QesSolution& sol, const SolverConfig& config);

/// Sign changes between consecutive samples whose magnitudes exceed the
/// underflow guard; exact zeros are skipped over.
int count_nodes(std::span<const WavefunctionSample> samples);

/// `points` equally spaced samples over the solution's natural domain; for a
/// confined solution the last sample is q = R.
std::vector<WavefunctionSample> sample_wavefunction(const QesSolution& sol, int points,
                                                    const SolverConfig& config);

/// Compares the closed-form energy against the chosen numerical oracle.
VerificationReport verify_solution(const QesSolution& sol, Method method,
                                   const SolverConfig& config);

/// Numerical eigenvalue only; status is skipped unless an expected energy is
/// given.
VerificationReport verify_numeric(const PotentialParams& params, const Channel& channel,
                                  std::optional<double> box, Method method,
                                  const SolverConfig& config,
                                  std::optional<double> expected_energy = std::nullopt);

/// E(D, l) against E(D + 2, l - 1); requires l >= 1.
VerificationReport degeneracy_check(const PotentialParams& params, int dim, int l, int k,
                                    const SolverConfig& config);

std::string to_string(Method m);
std::string to_string(Status s);

}  // namespace qes
