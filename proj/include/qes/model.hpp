#pragma once

#include <optional>
#include <vector>

namespace qes {

/// V(q) = a q^2 + b q^-4 + c q^-6 with a > 0, c > 0.
struct PotentialParams {
    double a = 1.0;
    double b = 0.0;
    double c = 1.0;

    /// Throws DomainError unless a > 0 and c > 0 (both finite).
    void validate() const;

    double potential(double q) const;

    bool operator==(const PotentialParams&) const = default;
};

/// Effective angular momentum L = l + (D-3)/2, held as the integer 2L so
/// half-integers are exact.
class EffectiveL {
public:
    constexpr EffectiveL() = default;
    static constexpr EffectiveL from_twice(int twice) { return EffectiveL(twice); }

    constexpr int twice() const { return twice_; }
    constexpr double value() const { return 0.5 * twice_; }
    /// L(L+1), computed from 2L without rounding for any representable L.
    constexpr double l_l1() const { return 0.25 * twice_ * (twice_ + 2); }

    bool operator==(const EffectiveL&) const = default;

private:
    constexpr explicit EffectiveL(int twice) : twice_(twice) {}
    int twice_ = 0;
};

EffectiveL effective_L(int dim, int l);

/// Quantum numbers: dimension D >= 2, orbital l >= 0 (|m| for D = 2), nodes k >= 0.
struct Channel {
    int dim = 3;
    int l = 0;
    int k = 0;

    void validate() const;
    EffectiveL L() const { return effective_L(dim, l); }

    bool operator==(const Channel&) const = default;
};

/// Exponent coefficients of exp(alpha q^2/2 + beta q^-2/2 + delta ln q).
struct AnsatzExponents {
    double alpha = 0.0;
    double beta = 0.0;
    double delta = 0.0;

    bool operator==(const AnsatzExponents&) const = default;
};

/// F(q) = q^{2k} + sum_{i<k} coeffs[i] q^{2i}. For k = 2, g holds the ratio
/// coeffs[0] / coeffs[1].
struct PrefactorPoly {
    int degree_k = 0;
    std::vector<double> coeffs;
    std::optional<double> g;

    /// Horner evaluation in q^2.
    double operator()(double q) const;

    bool operator==(const PrefactorPoly&) const = default;
};

struct QesSolution {
    PotentialParams params;
    Channel channel;
    AnsatzExponents exponents;
    PrefactorPoly prefactor;
    double energy = 0.0;
    std::optional<double> box_radius;

    bool confined() const { return box_radius.has_value(); }

    bool operator==(const QesSolution&) const = default;
};

struct WavefunctionSample {
    double q = 0.0;
    double value = 0.0;

    bool operator==(const WavefunctionSample&) const = default;
};

struct SolverConfig {
    double q_min_factor = 1.0;
    double q_max_factor = 1.0;
    int grid_points = 20000;
    double energy_tol = 1e-6;
    double residual_tol = 1e-8;
    double bracket_range = 64.0;
    int bracket_steps = 4096;

    void validate() const;

    bool operator==(const SolverConfig&) const = default;
};

}  // namespace qes
