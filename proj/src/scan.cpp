#include "qes/scan.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "qes/closed_form.hpp"
#include "qes/confined.hpp"
#include "qes/errors.hpp"

namespace qes {

namespace {

constexpr double kRootResidualTol = 1e-9;

// One scalar constraint in b. residual() returns nullopt where the closed
// form is undefined (degenerate denominator, complex R^2 branch).
struct Branch {
    std::function<std::optional<double>(double)> residual;
    std::function<std::vector<double>(double)> denominators;
    // Builds the record at a root, or explains why it is rejected.
    std::function<std::optional<QesSolution>(double, std::string&)> build;
};

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

int positive_roots_in_q2(const PrefactorPoly& f) {
    if (f.degree_k == 0) {
        return 0;
    }
    if (f.degree_k == 1) {
        return f.coeffs[0] < 0.0 ? 1 : 0;
    }
    const double p = f.coeffs[1], q = f.coeffs[0];
    const double disc = p * p - 4.0 * q;
    if (!(disc > 0.0)) {
        return 0;
    }
    const double s = std::sqrt(disc);
    int n = 0;
    for (double r : {0.5 * (-p + s), 0.5 * (-p - s)}) {
        n += r > 0.0 ? 1 : 0;
    }
    return n;
}

Branch unconfined_branch(const ScanRequest& req, const Channel& ch) {
    const double L = ch.L().value();
    const double a = req.a, c = req.c;
    const int k = req.k;
    Branch br;
    br.residual = [=](double b) -> std::optional<double> {
        try {
            return unconfined_constraint_residual({a, b, c}, L, k);
        } catch (const DegenerateError&) {
            return std::nullopt;
        }
    };
    br.denominators = [=](double b) {
        std::vector<double> out;
        if (k == 0) {
            return out;
        }
        const PotentialParams p{a, b, c};
        const Denominator d1 = k1_denominator(p, L);
        out.push_back(d1.value);
        if (k == 2) {
            out.push_back(d1.degenerate() ? std::numeric_limits<double>::quiet_NaN()
                                          : k2_denominator(p, L).value);
        }
        return out;
    };
    br.build = [=](double b, std::string& why) -> std::optional<QesSolution> {
        QesSolution sol = make_unconfined_solution({a, b, c}, ch);
        const int nodes = positive_roots_in_q2(sol.prefactor);
        if (nodes != k) {
            why = "prefactor has " + std::to_string(nodes) + " positive roots, expected " +
                  std::to_string(k);
            return std::nullopt;
        }
        return sol;
    };
    return br;
}

Branch confined_k0_branch(const ScanRequest& req, const Channel& ch, int sign) {
    const double L = ch.L().value();
    const double a = req.a, c = req.c;
    const double alpha = sign * std::sqrt(a);
    Branch br;
    br.residual = [=](double b) -> std::optional<double> {
        try {
            const PotentialParams p{a, b, c};
            return k0_alpha_constraint_residual(p, L, k0_box_radius(p, L, alpha), alpha);
        } catch (const DegenerateError&) {
            return std::nullopt;
        }
    };
    br.denominators = [=](double b) {
        const PotentialParams p{a, b, c};
        const Denominator d = k0_box_radius_denominator(p, L, alpha);
        double second = std::numeric_limits<double>::quiet_NaN();
        if (!d.degenerate()) {
            const double r2 = -16.0 * c * c / d.value;
            second = 2.0 * r2 * c * std::sqrt(c) + c * c;
        }
        return std::vector<double>{d.value, second};
    };
    br.build = [=](double b, std::string& why) -> std::optional<QesSolution> {
        const PotentialParams p{a, b, c};
        const double r2 = k0_box_radius(p, L, alpha);
        if (!(r2 > 0.0)) {
            why = "non-physical box: R^2 = " + std::to_string(r2);
            return std::nullopt;
        }
        return make_confined_solution(p, ch, sign, r2);
    };
    return br;
}

Branch confined_k1_branch(const ScanRequest& req, const Channel& ch, int sign, int which) {
    const double L = ch.L().value();
    const double a = req.a, c = req.c;
    const double alpha = sign * std::sqrt(a);
    auto candidate = [=](double b) -> std::optional<K1ConfinedCandidate> {
        const auto cands = k1_confined_candidates({a, b, c}, L, alpha);
        if (cands.size() != 2) {
            return std::nullopt;
        }
        return cands[static_cast<std::size_t>(which)];
    };
    Branch br;
    br.residual = [=](double b) -> std::optional<double> {
        const auto cand = candidate(b);
        if (!cand) {
            return std::nullopt;
        }
        try {
            return k1_confined_residuals({a, b, c}, L, alpha, cand->a1, cand->R2).r_alpha;
        } catch (const DegenerateError&) {
            return std::nullopt;
        }
    };
    br.denominators = [=](double b) {
        const PotentialParams p{a, b, c};
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const double w = k0_box_radius_denominator(p, L, alpha).value;
        const auto cand = candidate(b);
        if (!cand) {
            return std::vector<double>{w, nan, nan};
        }
        const double c32 = c * std::sqrt(c);
        return std::vector<double>{w, 16.0 * c * c + cand->R2 * w,
                                   cand->a1 * (c * c + 4.0 * cand->R2 * c32) - c * c * cand->R2};
    };
    br.build = [=](double b, std::string& why) -> std::optional<QesSolution> {
        const auto cand = candidate(b);
        if (!cand) {
            why = "no real (R^2, a1) pair";
            return std::nullopt;
        }
        if (!(cand->R2 > 0.0)) {
            why = "non-physical box: R^2 = " + std::to_string(cand->R2);
            return std::nullopt;
        }
        if (!(-cand->a1 > 0.0 && -cand->a1 < cand->R2)) {
            why = "prefactor node q^2 = " + std::to_string(-cand->a1) + " not inside the box";
            return std::nullopt;
        }
        return make_confined_solution({a, b, c}, ch, sign, cand->R2, cand->a1);
    };
    return br;
}

std::optional<double> bisect(const Branch& br, double lo, double hi, double flo) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const auto fm = br.residual(mid);
        if (!fm) {
            return std::nullopt;
        }
        if (*fm == 0.0) {
            return mid;
        }
        if (sign_of(*fm) == sign_of(flo)) {
            lo = mid;
            flo = *fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Sign-change location of one denominator inside [lo, hi].
double locate_pole(const Branch& br, std::size_t index, double lo, double hi) {
    const int slo = sign_of(br.denominators(lo)[index]);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double v = br.denominators(mid)[index];
        if (std::isnan(v) || sign_of(v) != slo) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}


void scan_branch(const Branch& br, const ScanRequest& req, int l, int sign,
                 std::vector<double>& roots, ScanDiagnostics& diag) {
    const int steps = req.config.bracket_steps;
    const double range = req.config.bracket_range;
    const double width = 2.0 * range / steps;
    std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) {
        grid[static_cast<std::size_t>(i)] = i == steps ? range : -range + i * width;
    }
    std::vector<std::optional<double>> f(grid.size());
    std::vector<std::vector<double>> dens(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        f[i] = br.residual(grid[i]);
        dens[i] = br.denominators(grid[i]);
    }

    auto try_interval = [&](double lo, double hi, std::optional<double> flo,
                            std::optional<double> fhi) {
        if (!flo || !fhi) {
            return;
        }
        if (*flo == 0.0) {
            roots.push_back(lo);
            ++diag.sign_changes;
            return;
        }
        if (sign_of(*flo) == sign_of(*fhi)) {
            return;
        }
        ++diag.sign_changes;
        const auto root = bisect(br, lo, hi, *flo);
        if (!root) {
            return;
        }
        const auto fr = br.residual(*root);
        if (!fr || std::abs(*fr) > kRootResidualTol) {
            // Sign change across a pole of the residual.
            diag.rejected.push_back({*root, l, sign, "residual diverges (pole)"});
            return;
        }
        roots.push_back(*root);
    };

    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        ++diag.cells_scanned;
        const double lo = grid[i], hi = grid[i + 1];
        std::vector<double> poles;
        for (std::size_t d = 0; d < dens[i].size(); ++d) {
            const double v0 = dens[i][d], v1 = dens[i + 1][d];
            if (std::isnan(v0) || std::isnan(v1)) {
                continue;
            }
            if (sign_of(v0) != sign_of(v1)) {
                poles.push_back(locate_pole(br, d, lo, hi));
            }
        }
        if (poles.empty()) {
            try_interval(lo, hi, f[i], f[i + 1]);
            continue;
        }
        ++diag.singular_cells;
        std::sort(poles.begin(), poles.end());
        std::vector<double> edges{lo};
        for (double p : poles) {
            const double gap = 1e-10 * (1.0 + std::abs(p));
            edges.push_back(p - gap);
            edges.push_back(p + gap);
        }
        edges.push_back(hi);
        for (std::size_t e = 0; e + 1 < edges.size(); e += 2) {
            const double a = edges[e], b = edges[e + 1];
            if (!(b > a)) {
                continue;
            }
            try_interval(a, b, e == 0 ? f[i] : br.residual(a),
                         e + 2 == edges.size() ? f[i + 1] : br.residual(b));
        }
    }
}

std::vector<double> dedupe(std::vector<double> roots) {
    std::sort(roots.begin(), roots.end());
    std::vector<double> out;
    for (double r : roots) {
        if (out.empty() || std::abs(r - out.back()) > 1e-8 * (1.0 + std::abs(r))) {
            out.push_back(r);
        }
    }
    return out;
}

}  // namespace

void ScanRequest::validate() const {
    PotentialParams{a, 0.0, c}.validate();
    if (l_list.empty()) {
        throw DomainError("l_list must not be empty");
    }
    for (int l : l_list) {
        (void)effective_L(dim, l);
    }
    if (k < 0 || k > 2) {
        throw DomainError("k must be 0, 1 or 2");
    }
    if (confined && k > 1) {
        throw DomainError("confined closed forms exist for k <= 1 only");
    }
    if (!confined && alpha_sign == AlphaSign::plus) {
        throw DomainError("unconfined solutions require alpha = -sqrt(a)");
    }
    config.validate();
}

std::vector<std::pair<std::string, double>> constraint_residuals(const QesSolution& sol) {
    const double L = sol.channel.L().value();
    const auto& p = sol.params;
    if (!sol.box_radius) {
        return {{"constraint", unconfined_constraint_residual(p, L, sol.channel.k)}};
    }
    const double r2 = *sol.box_radius * *sol.box_radius;
    const double alpha = sol.exponents.alpha;
    if (sol.channel.k == 0) {
        return {{"box_radius", r2 - k0_box_radius(p, L, alpha)},
                {"alpha", k0_alpha_constraint_residual(p, L, r2, alpha)}};
    }
    const auto r = k1_confined_residuals(p, L, alpha, sol.prefactor.coeffs.at(0), r2);
    return {{"a1", r.r_a1}, {"box_radius", r.r_R2}, {"alpha", r.r_alpha}};
}

double max_constraint_residual(const QesSolution& sol) {
    double worst = 0.0;
    for (const auto& [name, value] : constraint_residuals(sol)) {
        worst = std::max(worst, std::abs(value));
    }
    return worst;
}

ScanResult scan_b(const ScanRequest& request) {
    request.validate();
    ScanResult result;
    result.request = request;

    std::vector<int> signs;
    if (!request.confined || request.alpha_sign == AlphaSign::minus) {
        signs = {-1};
    } else if (request.alpha_sign == AlphaSign::plus) {
        signs = {1};
    } else {
        signs = {-1, 1};
    }

    for (int l : request.l_list) {
        const Channel ch{request.dim, l, request.k};
        for (int sign : signs) {
            std::vector<Branch> branches;
            if (!request.confined) {
                branches.push_back(unconfined_branch(request, ch));
            } else if (request.k == 0) {
                branches.push_back(confined_k0_branch(request, ch, sign));
            } else {
                branches.push_back(confined_k1_branch(request, ch, sign, 0));
                branches.push_back(confined_k1_branch(request, ch, sign, 1));
            }
            std::vector<QesSolution> found;
            for (const auto& br : branches) {
                std::vector<double> roots;
                scan_branch(br, request, l, sign, roots, result.diagnostics);
                for (double b : dedupe(roots)) {
                    std::string why;
                    std::optional<QesSolution> sol;
                    try {
                        sol = br.build(b, why);
                    } catch (const Error& e) {
                        why = e.what();
                    }
                    if (!sol) {
                        result.diagnostics.rejected.push_back({b, l, sign, why});
                        continue;
                    }
                    double worst = 0.0;
                    try {
                        worst = max_constraint_residual(*sol);
                    } catch (const DegenerateError&) {
                        worst = std::numeric_limits<double>::infinity();
                    }
                    if (!(worst <= kRootResidualTol)) {
                        result.diagnostics.rejected.push_back(
                            {b, l, sign, "residual " + std::to_string(worst) + " above tolerance"});
                        continue;
                    }
                    found.push_back(*sol);
                }
            }
            std::sort(found.begin(), found.end(), [](const QesSolution& x, const QesSolution& y) {
                if (x.params.b != y.params.b) {
                    return x.params.b < y.params.b;
                }
                return x.box_radius.value_or(0.0) < y.box_radius.value_or(0.0);
            });
            for (auto& s : found) {
                const bool dup = !result.solutions.empty() &&
                                 result.solutions.back().channel == s.channel &&
                                 result.solutions.back().exponents.alpha == s.exponents.alpha &&
                                 std::abs(result.solutions.back().params.b - s.params.b) <=
                                     1e-8 * (1.0 + std::abs(s.params.b)) &&
                                 result.solutions.back().box_radius.has_value() ==
                                     s.box_radius.has_value() &&
                                 std::abs(result.solutions.back().box_radius.value_or(0.0) -
                                          s.box_radius.value_or(0.0)) <= 1e-8;
                if (!dup) {
                    result.solutions.push_back(std::move(s));
                }
            }
        }
    }
    return result;
}

std::vector<ScanResult> enumerate_table(const std::vector<ScanRequest>& requests) {
    std::vector<ScanResult> out;
    out.reserve(requests.size());
    for (const auto& r : requests) {
        out.push_back(scan_b(r));
    }
    return out;
}

}  // namespace qes
