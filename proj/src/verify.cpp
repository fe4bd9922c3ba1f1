#include "qes/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qes/closed_form.hpp"
#include "qes/confined.hpp"
#include "qes/errors.hpp"

namespace qes {

namespace {

constexpr double kUnderflowGuard = 1e-290;
constexpr double kRescale = 1e200;
// Relative stencil width for the five-point second derivative.
constexpr double kStencil = 2.5e-4;

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

double effective_potential(const PotentialParams& p, double ll, double q) {
    return ll / (q * q) + p.potential(q);
}

// Radial problem on x = ln q with R(q) = sqrt(q) u(x), for which the
// equation reads u'' = [1/4 + q^2 (V_eff - E)] u.
class LogGrid {
public:
    LogGrid(const PotentialParams& p, double ll, RadialDomain d, int n)
        : n_(n), x0_(std::log(d.q_min)), h_((std::log(d.q_max) - x0_) / n) {
        if (!(d.q_max > d.q_min) || n < 8) {
            throw GridError("empty radial domain");
        }
        q_.resize(static_cast<std::size_t>(n) + 1);
        veff_.resize(q_.size());
        for (int i = 0; i <= n; ++i) {
            q_[i] = i == 0 ? d.q_min : (i == n ? d.q_max : std::exp(x0_ + i * h_));
            veff_[i] = effective_potential(p, ll, q_[i]);
        }
    }

    int n() const { return n_; }
    double h() const { return h_; }
    double x(int i) const { return x0_ + i * h_; }
    double q(int i) const { return q_[static_cast<std::size_t>(i)]; }
    double veff(int i) const { return veff_[static_cast<std::size_t>(i)]; }
    double min_veff() const { return *std::min_element(veff_.begin(), veff_.end()); }

private:
    int n_;
    double x0_;
    double h_;
    std::vector<double> q_;
    std::vector<double> veff_;
};

class Shooter {
public:
    Shooter(const PotentialParams& p, double ll, RadialDomain d, bool confined, int n)
        : p_(p), grid_(p, ll, d, n), confined_(confined) {}

    void outward(double e, std::vector<double>& u) const {
        const int n = grid_.n();
        u.assign(static_cast<std::size_t>(n) + 1, 0.0);
        // R ~ q^delta exp(-sqrt(c) / (2 q^2)) as q -> 0
        const double sc = std::sqrt(p_.c);
        const double delta = 1.5 + p_.b / (2.0 * sc);
        auto log_u = [&](int i) {
            const double q = grid_.q(i);
            return delta * std::log(q) - sc / (2.0 * q * q) - 0.5 * grid_.x(i);
        };
        u[0] = 1.0;
        u[1] = std::exp(log_u(1) - log_u(0));
        double w_prev = weight(0, e), w = weight(1, e);
        for (int i = 1; i < n; ++i) {
            const double w_next = weight(i + 1, e);
            u[i + 1] = ((12.0 - 10.0 * w) * u[i] - w_prev * u[i - 1]) / w_next;
            if (!std::isfinite(u[i + 1])) {
                throw GridError("non-finite value in outward integration");
            }
            if (std::abs(u[i + 1]) > kRescale) {
                for (int j = 0; j <= i + 1; ++j) {
                    u[j] /= kRescale;
                }
            }
            w_prev = w;
            w = w_next;
        }
    }

    void inward(double e, int m, std::vector<double>& u) const {
        const int n = grid_.n();
        u.assign(static_cast<std::size_t>(n) + 1, 0.0);
        if (confined_) {
            u[n] = 0.0;
            u[n - 1] = 1.0;
        } else {
            // R ~ q^gamma exp(-sqrt(a) q^2 / 2) as q -> inf
            const double sa = std::sqrt(p_.a);
            const double gamma = e / (2.0 * sa) - 0.5;
            auto log_u = [&](int i) {
                const double q = grid_.q(i);
                return gamma * std::log(q) - 0.5 * sa * q * q - 0.5 * grid_.x(i);
            };
            u[n] = 1.0;
            u[n - 1] = std::exp(log_u(n - 1) - log_u(n));
        }
        double w_next = weight(n, e), w = weight(n - 1, e);
        for (int i = n - 1; i > m - 1; --i) {
            const double w_prev = weight(i - 1, e);
            u[i - 1] = ((12.0 - 10.0 * w) * u[i] - w_next * u[i + 1]) / w_prev;
            if (!std::isfinite(u[i - 1])) {
                throw GridError("non-finite value in inward integration");
            }
            if (std::abs(u[i - 1]) > kRescale) {
                for (int j = i - 1; j <= n; ++j) {
                    u[j] /= kRescale;
                }
            }
            w_next = w;
            w = w_prev;
        }
    }

    int nodes(double e) const {
        outward(e, scratch_out_);
        return sign_changes(scratch_out_, 1, grid_.n());
    }

    int matching_index(double e) const {
        outward(e, scratch_out_);
        const int n = grid_.n();
        int turning = -1;
        for (int i = n; i >= 0; --i) {
            if (grid_.veff(i) < e) {
                turning = i;
                break;
            }
        }
        if (turning < 0) {
            turning = 0;
            for (int i = 1; i <= n; ++i) {
                if (grid_.veff(i) < grid_.veff(turning)) {
                    turning = i;
                }
            }
        }
        const int hi = std::min(turning, n - 3);
        for (int i = hi; i > 2; --i) {
            const double a = std::abs(scratch_out_[i]);
            if (a >= std::abs(scratch_out_[i - 1]) && a >= std::abs(scratch_out_[i + 1])) {
                return i;
            }
        }
        return std::clamp(turning, 2, n - 3);
    }

    // Scaled discrete Wronskian of the outward and inward solutions at m.
    double wronskian(double e, int m) const {
        outward(e, scratch_out_);
        inward(e, m, scratch_in_);
        const auto& uo = scratch_out_;
        const auto& ui = scratch_in_;
        const double so = std::abs(uo[m]) + std::abs(uo[m + 1]);
        const double si = std::abs(ui[m]) + std::abs(ui[m + 1]);
        if (so == 0.0 || si == 0.0) {
            throw GridError("vanishing solution at the matching point");
        }
        return (uo[m + 1] / so) * (ui[m] / si) - (uo[m] / so) * (ui[m + 1] / si);
    }

    double solve(int k, double tol) const {
        const double vmin = grid_.min_veff();
        double lo = vmin - 1e-6 * (1.0 + std::abs(vmin));
        int n_lo = nodes(lo);
        if (n_lo > k) {
            throw BracketError("node count already above k at the potential minimum");
        }
        double step = std::max(1.0, 0.1 * std::abs(vmin));
        double hi = lo + step;
        int n_hi = nodes(hi);
        for (int it = 0; n_hi <= k; ++it) {
            if (it > 200) {
                throw BracketError("could not bracket the requested state from above");
            }
            lo = hi;
            n_lo = n_hi;
            step *= 2.0;
            hi = lo + step;
            n_hi = nodes(hi);
        }
        for (int it = 0; !(n_lo == k && n_hi == k + 1); ++it) {
            const double mid = 0.5 * (lo + hi);
            if (it > 400 || mid <= lo || mid >= hi) {
                throw BracketError("node-count bisection did not isolate the state");
            }
            const int nm = nodes(mid);
            if (nm <= k) {
                lo = mid;
                n_lo = nm;
            } else {
                hi = mid;
                n_hi = nm;
            }
        }

        const int m = matching_index(0.5 * (lo + hi));
        double w_lo = wronskian(lo, m);
        const double w_hi = wronskian(hi, m);
        const bool use_wronskian = sign_of(w_lo) != sign_of(w_hi) && w_lo != 0.0 && w_hi != 0.0;
        for (int it = 0; it < 400; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (hi - lo <= tol * (1.0 + std::abs(mid)) || mid <= lo || mid >= hi) {
                break;
            }
            bool go_up;
            if (use_wronskian) {
                const double wm = wronskian(mid, m);
                if (wm == 0.0) {
                    return mid;
                }
                go_up = sign_of(wm) == sign_of(w_lo);
                if (go_up) {
                    w_lo = wm;
                }
            } else {
                go_up = nodes(mid) <= k;
            }
            (go_up ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

    std::vector<WavefunctionSample> state(double e) const {
        const int m = matching_index(e);
        outward(e, scratch_out_);
        inward(e, m, scratch_in_);
        const int j = std::abs(scratch_in_[m]) > std::abs(scratch_in_[m + 1]) ? m : m + 1;
        const double scale = scratch_out_[j] / scratch_in_[j];
        std::vector<WavefunctionSample> out;
        out.reserve(static_cast<std::size_t>(grid_.n()) + 1);
        double peak = 0.0;
        for (int i = 0; i <= grid_.n(); ++i) {
            const double u = i <= m ? scratch_out_[i] : scale * scratch_in_[i];
            const double r = std::sqrt(grid_.q(i)) * u;
            peak = std::max(peak, std::abs(r));
            out.push_back({grid_.q(i), r});
        }
        if (peak > 0.0) {
            for (auto& s : out) {
                s.value /= peak;
            }
        }
        return out;
    }

private:
    double weight(int i, double e) const {
        const double q = grid_.q(i);
        const double f = 0.25 + q * q * (grid_.veff(i) - e);
        return 1.0 - grid_.h() * grid_.h() * f / 12.0;
    }

    static int sign_changes(const std::vector<double>& u, int from, int to) {
        int count = 0, prev = 0;
        for (int i = from; i <= to; ++i) {
            const int s = sign_of(u[i]);
            if (s == 0) {
                continue;
            }
            if (prev != 0 && s != prev) {
                ++count;
            }
            prev = s;
        }
        return count;
    }

    PotentialParams p_;
    LogGrid grid_;
    bool confined_;
    mutable std::vector<double> scratch_out_;
    mutable std::vector<double> scratch_in_;
};

void check_inputs(const PotentialParams& params, int k, std::optional<double> box,
                  const SolverConfig& config) {
    params.validate();
    config.validate();
    if (k < 0) {
        throw DomainError("node count must be >= 0");
    }
    if (box && !(*box > 0.0)) {
        throw DomainError("box radius must be positive");
    }
}

// Solves on a domain sized for the potential minimum, then once more on the
// domain sized for that (upper-bound) energy.
template <typename Solve>
double two_pass(const PotentialParams& params, double L, std::optional<double> box,
                const SolverConfig& config, Solve&& solve) {
    if (box) {
        return solve(radial_domain(params, L, 0.0, box, config));
    }
    const auto first = radial_domain(params, L, -std::numeric_limits<double>::infinity(),
                                     std::nullopt, config);
    const double e1 = solve(first);
    const auto second = radial_domain(params, L, e1, std::nullopt, config);
    if (second.q_max <= first.q_max) {
        return e1;
    }
    return solve(second);
}

double fd_single(const PotentialParams& params, double ll, RadialDomain d, int n, int k) {
    const LogGrid g(params, ll, d, n);
    const double h2 = g.h() * g.h();
    const int m = n - 1;
    std::vector<double> diag(static_cast<std::size_t>(m));
    std::vector<double> off(static_cast<std::size_t>(m) - 1);
    for (int i = 1; i <= m; ++i) {
        const double q = g.q(i);
        diag[i - 1] = (2.0 / h2 + 0.25) / (q * q) + g.veff(i);
        if (i < m) {
            off[i - 1] = -1.0 / (h2 * q * g.q(i + 1));
        }
    }
    if (k >= m) {
        throw GridError("grid has fewer points than the requested state index");
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < m; ++i) {
        const double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < m ? std::abs(off[i]) : 0.0);
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
    }
    // Smallest x with more than k eigenvalues below it.
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (sturm_count(diag, off, mid) <= k) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// closed_form_value in extended precision, so that the five-point stencil
// loses fewer digits to cancellation.
long double extended_value(const QesSolution& sol, long double q) {
    const auto& ex = sol.exponents;
    const long double q2 = q * q;
    const long double s = 0.5L * ex.alpha * q2 + 0.5L * ex.beta / q2 + ex.delta * std::log(q);
    if (s < -11000.0L) {
        return 0.0L;
    }
    long double f = 1.0L;
    for (auto it = sol.prefactor.coeffs.rbegin(); it != sol.prefactor.coeffs.rend(); ++it) {
        f = f * q2 + *it;
    }
    if (sol.box_radius) {
        const long double r = *sol.box_radius;
        f *= r * r - q2;
    }
    return f * std::exp(s);
}

}  // namespace

RadialDomain radial_domain(const PotentialParams& params, double L, double energy_hint,
                           std::optional<double> box, const SolverConfig& config) {
    const double q_min = std::sqrt(std::sqrt(params.c) / 80.0) * config.q_min_factor;
    if (box) {
        if (!(*box > 1.01 * q_min)) {
            throw GridError("box radius too small for the inner grid cutoff");
        }
        return {q_min, *box};
    }
    const double ll = L * (L + 1.0);
    double q_hi = 2.0 * std::max(1.0, std::sqrt(std::max(energy_hint, 0.0) / params.a)) + 1.0;
    while (std::isfinite(energy_hint) && effective_potential(params, ll, q_hi) <= energy_hint) {
        q_hi *= 2.0;
    }
    constexpr int kSamples = 4000;
    const double lx0 = std::log(q_min), lx1 = std::log(q_hi);
    double turning = -1.0, argmin = q_min, vmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kSamples; ++i) {
        const double q = std::exp(lx0 + (lx1 - lx0) * i / kSamples);
        const double v = effective_potential(params, ll, q);
        if (v < vmin) {
            vmin = v;
            argmin = q;
        }
        if (v <= energy_hint) {
            turning = q;
        }
    }
    if (turning < 0.0) {
        turning = argmin;
    }
    double q_max = std::sqrt(turning * turning + 80.0 / std::sqrt(params.a)) * config.q_max_factor;
    q_max = std::max(q_max, 1.5 * q_min);
    return {q_min, q_max};
}

double shoot_eigenvalue(const PotentialParams& params, double L, int k, std::optional<double> box,
                        const SolverConfig& config) {
    check_inputs(params, k, box, config);
    const double ll = L * (L + 1.0);
    const double tol = config.energy_tol / 10.0;
    return two_pass(params, L, box, config, [&](RadialDomain d) {
        return Shooter(params, ll, d, box.has_value(), config.grid_points).solve(k, tol);
    });
}

NumericalState shoot_eigenstate(const PotentialParams& params, double L, int k,
                                std::optional<double> box, const SolverConfig& config) {
    check_inputs(params, k, box, config);
    const double ll = L * (L + 1.0);
    const double tol = config.energy_tol / 10.0;
    NumericalState out;
    out.energy = two_pass(params, L, box, config, [&](RadialDomain d) {
        const Shooter s(params, ll, d, box.has_value(), config.grid_points);
        const double e = s.solve(k, tol);
        out.samples = s.state(e);
        return e;
    });
    return out;
}

int sturm_count(std::span<const double> diag, std::span<const double> off, double shift) {
    int count = 0;
    double pivot = 1.0;
    const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    for (std::size_t i = 0; i < diag.size(); ++i) {
        const double coupling = i == 0 ? 0.0 : off[i - 1] * off[i - 1] / pivot;
        pivot = diag[i] - shift - coupling;
        if (pivot == 0.0) {
            pivot = -tiny;
        }
        if (pivot < 0.0) {
            ++count;
        }
    }
    return count;
}

double fd_eigenvalue(const PotentialParams& params, double L, int k, std::optional<double> box,
                     const SolverConfig& config) {
    check_inputs(params, k, box, config);
    const double ll = L * (L + 1.0);
    const int base = std::max(100, config.grid_points / 10);
    return two_pass(params, L, box, config, [&](RadialDomain d) {
        for (int n = base; n <= 16 * base; n *= 2) {
            const double coarse = fd_single(params, ll, d, n, k);
            const double fine = fd_single(params, ll, d, 2 * n, k);
            if (std::abs(coarse - fine) <= 100.0 * config.energy_tol * (1.0 + std::abs(fine))) {
                return (4.0 * fine - coarse) / 3.0;
            }
        }
        throw ResolutionError("finite-difference eigenvalue not converged under grid refinement");
    });
}

double closed_form_value(const QesSolution& sol, double q) {
    const double env = envelope(sol.exponents, q);
    if (env == 0.0) {
        return 0.0;
    }
    double v = sol.prefactor(q) * env;
    if (sol.box_radius) {
        v *= *sol.box_radius * *sol.box_radius - q * q;
    }
    return v;
}

double ode_residual_norm(const QesSolution& sol, const SolverConfig& config) {
    const double L = sol.channel.L().value();
    const long double ll = L * (L + 1.0);
    const long double e = sol.energy;
    const RadialDomain d = radial_domain(sol.params, L, sol.energy, sol.box_radius, config);
    constexpr int kPoints = 4000;
    const double lx0 = std::log(d.q_min), lx1 = std::log(d.q_max);
    long double worst = 0.0L, peak = 0.0L;
    for (int j = 1; j < kPoints; ++j) {
        const long double q = std::exp(lx0 + (lx1 - lx0) * j / kPoints);
        const long double h = kStencil * q;
        const long double r = extended_value(sol, q);
        if (std::abs(r) <= kUnderflowGuard) {
            continue;
        }
        const long double d2 =
            (-extended_value(sol, q + 2.0L * h) + 16.0L * extended_value(sol, q + h) - 30.0L * r +
             16.0L * extended_value(sol, q - h) - extended_value(sol, q - 2.0L * h)) /
            (12.0L * h * h);
        const long double q2 = q * q, inv2 = 1.0L / q2;
        const auto& p = sol.params;
        const long double veff = ll * inv2 + p.a * q2 + inv2 * inv2 * (p.b + p.c * inv2);
        worst = std::max(worst, std::abs(-d2 + (veff - e) * r));
        peak = std::max(peak, std::abs(r));
    }
    if (peak == 0.0L) {
        return std::numeric_limits<double>::infinity();
    }
    return static_cast<double>(worst / ((std::abs(e) + 1.0L) * peak));
}

int count_nodes(std::span<const WavefunctionSample> samples) {
    int count = 0, prev = 0;
    for (const auto& s : samples) {
        if (!(std::abs(s.value) > kUnderflowGuard)) {
            continue;
        }
        const int sg = sign_of(s.value);
        if (prev != 0 && sg != prev) {
            ++count;
        }
        prev = sg;
    }
    return count;
}

std::vector<WavefunctionSample> sample_wavefunction(const QesSolution& sol, int points,
                                                    const SolverConfig& config) {
    if (points < 2) {
        throw DomainError("at least two sample points are required");
    }
    const double L = sol.channel.L().value();
    const RadialDomain d = radial_domain(sol.params, L, sol.energy, sol.box_radius, config);
    std::vector<WavefunctionSample> out;
    out.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double q = i == points - 1 ? d.q_max
                                         : d.q_min + (d.q_max - d.q_min) * i / (points - 1);
        const double v = sol.box_radius ? eval_confined_wavefunction(sol, q) : eval_wavefunction(sol, q);
        out.push_back({q, v});
    }
    return out;
}

VerificationReport verify_solution(const QesSolution& sol, Method method,
                                   const SolverConfig& config) {
    const double L = sol.channel.L().value();
    const int k = sol.channel.k;
    VerificationReport rep;
    rep.method = method;
    rep.e_closed = sol.energy;
    rep.e_numeric = method == Method::shooting
                        ? shoot_eigenvalue(sol.params, L, k, sol.box_radius, config)
                        : fd_eigenvalue(sol.params, L, k, sol.box_radius, config);
    rep.rel_error = std::abs(rep.e_closed - rep.e_numeric) / (1.0 + std::abs(rep.e_closed));
    rep.residual_norm = ode_residual_norm(sol, config);
    const auto samples = sample_wavefunction(sol, 4001, config);
    rep.node_count = count_nodes(std::span(samples).subspan(1, samples.size() - 2));
    const bool ok = rep.rel_error <= config.energy_tol && rep.node_count == k;
    rep.status = ok ? Status::pass : Status::fail;
    std::ostringstream notes;
    notes << "closed form vs " << to_string(method) << "; ode residual "
          << (rep.residual_norm <= config.residual_tol ? "within" : "above") << " residual_tol";
    rep.notes = notes.str();
    return rep;
}

VerificationReport verify_numeric(const PotentialParams& params, const Channel& channel,
                                  std::optional<double> box, Method method,
                                  const SolverConfig& config,
                                  std::optional<double> expected_energy) {
    channel.validate();
    const double L = channel.L().value();
    VerificationReport rep;
    rep.method = method;
    rep.e_numeric = method == Method::shooting
                        ? shoot_eigenvalue(params, L, channel.k, box, config)
                        : fd_eigenvalue(params, L, channel.k, box, config);
    rep.node_count = channel.k;
    rep.residual_norm = std::numeric_limits<double>::quiet_NaN();
    if (expected_energy) {
        rep.e_closed = *expected_energy;
        rep.rel_error = std::abs(rep.e_closed - rep.e_numeric) / (1.0 + std::abs(rep.e_closed));
        rep.status = rep.rel_error <= config.energy_tol ? Status::pass : Status::fail;
        rep.notes = "numerical eigenvalue vs expected energy";
    } else {
        rep.e_closed = std::numeric_limits<double>::quiet_NaN();
        rep.rel_error = std::numeric_limits<double>::quiet_NaN();
        rep.status = Status::skipped;
        rep.notes = "no closed form at these parameters; numerical eigenvalue only";
    }
    return rep;
}

VerificationReport degeneracy_check(const PotentialParams& params, int dim, int l, int k,
                                    const SolverConfig& config) {
    if (l < 1) {
        throw DomainError("degeneracy check needs l >= 1");
    }
    const EffectiveL lower = effective_L(dim, l);
    const EffectiveL upper = effective_L(dim + 2, l - 1);
    VerificationReport rep;
    rep.method = Method::shooting;
    rep.e_closed = shoot_eigenvalue(params, lower.value(), k, std::nullopt, config);
    rep.e_numeric = shoot_eigenvalue(params, upper.value(), k, std::nullopt, config);
    rep.rel_error = std::abs(rep.e_closed - rep.e_numeric) / (1.0 + std::abs(rep.e_closed));
    rep.node_count = k;
    rep.residual_norm = 0.0;
    rep.status = rep.rel_error <= config.energy_tol ? Status::pass : Status::fail;
    std::ostringstream notes;
    notes << "E(D=" << dim << ", l=" << l << ") vs E(D=" << dim + 2 << ", l=" << l - 1
          << "), both L=" << lower.value();
    rep.notes = notes.str();
    return rep;
}

std::string to_string(Method m) { return m == Method::shooting ? "shooting" : "fd_matrix"; }

std::string to_string(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        default: return "skipped";
    }
}

}  // namespace qes
