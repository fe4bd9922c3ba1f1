#include "qes/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "qes/closed_form.hpp"
#include "qes/confined.hpp"
#include "qes/errors.hpp"
#include "qes/scan.hpp"
#include "qes/serialization.hpp"
#include "qes/verify.hpp"

namespace qes::cli {

namespace {

constexpr double kQesTol = 1e-9;

struct ParamFlags {
    double a = 1.0;
    double b = 0.0;
    double c = 1.0;
    int dim = 3;
    int l = 0;
    int k = 0;
    bool confined = false;
    std::string alpha_sign = "-1";
};

void add_param_flags(CLI::App* cmd, ParamFlags& f, bool with_b) {
    cmd->add_option("--a", f.a, "coefficient of q^2 (> 0)")->required();
    if (with_b) {
        cmd->add_option("--b", f.b, "coefficient of q^-4")->required();
    }
    cmd->add_option("--c", f.c, "coefficient of q^-6 (> 0)")->required();
    cmd->add_option("--dim", f.dim, "spatial dimension D >= 2")->capture_default_str();
    cmd->add_option("--k", f.k, "number of radial nodes")->capture_default_str();
    cmd->add_flag("--confined", f.confined, "impenetrable wall at the closed-form radius");
    cmd->add_option("--alpha-sign", f.alpha_sign, "sign of alpha: -1, +1 (confined) or both (scan)")
        ->capture_default_str();
}

int parse_sign(const std::string& s) {
    if (s == "-1" || s == "-" || s == "minus") return -1;
    if (s == "+1" || s == "1" || s == "+" || s == "plus") return 1;
    throw DomainError("alpha sign must be -1 or +1, got '" + s + "'");
}

AlphaSign parse_alpha_sign(const std::string& s) {
    if (s == "both") return AlphaSign::both;
    return parse_sign(s) < 0 ? AlphaSign::minus : AlphaSign::plus;
}

// Closed-form record assembled from command-line parameters, valid or not.
struct Built {
    PotentialParams params;
    Channel channel;
    int sign = -1;
    std::optional<QesSolution> solution;
    std::optional<double> box_radius_squared;
    std::vector<std::pair<std::string, double>> residuals;
    bool physical = false;
    std::string notes;

    bool quasi_exact() const {
        if (residuals.empty()) return false;
        return std::all_of(residuals.begin(), residuals.end(),
                           [](const auto& r) { return std::abs(r.second) <= kQesTol; });
    }
};

int positive_q2_roots(const PrefactorPoly& f) {
    if (f.degree_k == 1) return f.coeffs[0] < 0.0 ? 1 : 0;
    if (f.degree_k == 2) {
        const double p = f.coeffs[1], q = f.coeffs[0], disc = p * p - 4.0 * q;
        if (!(disc > 0.0)) return 0;
        const double s = std::sqrt(disc);
        return (-p + s > 0.0 ? 1 : 0) + (-p - s > 0.0 ? 1 : 0);
    }
    return 0;
}

Built build(const ParamFlags& f) {
    Built out;
    out.params = {f.a, f.b, f.c};
    out.params.validate();
    out.channel = {f.dim, f.l, f.k};
    out.channel.validate();
    out.sign = parse_sign(f.alpha_sign);
    const double L = out.channel.L().value();

    if (!f.confined) {
        if (out.sign > 0) {
            throw DomainError("unconfined solutions require alpha = -sqrt(a)");
        }
        out.solution = make_unconfined_solution(out.params, out.channel);
        out.residuals = constraint_residuals(*out.solution);
        const int roots = positive_q2_roots(out.solution->prefactor);
        out.physical = roots == f.k;
        if (!out.physical) {
            out.notes = "prefactor has " + std::to_string(roots) + " positive roots in q^2";
        }
        return out;
    }

    if (f.k > 1) {
        throw DomainError("confined closed forms exist for k <= 1 only");
    }
    const double alpha = out.sign * std::sqrt(out.params.a);
    if (f.k == 0) {
        const double r2 = k0_box_radius(out.params, L, alpha);
        out.box_radius_squared = r2;
        if (r2 > 0.0) {
            out.solution = make_confined_solution(out.params, out.channel, out.sign, r2);
            out.residuals = constraint_residuals(*out.solution);
            out.physical = true;
        } else {
            out.residuals = {{"alpha", k0_alpha_constraint_residual(out.params, L, r2, alpha)}};
            out.notes = "R^2 <= 0: no physical box";
        }
        return out;
    }

    const auto cands = k1_confined_candidates(out.params, L, alpha);
    if (cands.empty()) {
        throw DegenerateError("no real (R^2, a1) pair for the confined k = 1 system");
    }
    // Prefer the branch with the prefactor node inside the box, then the smaller residual.
    auto score = [&](const K1ConfinedCandidate& cand) {
        const bool inside = cand.R2 > 0.0 && -cand.a1 > 0.0 && -cand.a1 < cand.R2;
        const double r = std::abs(
            k1_confined_residuals(out.params, L, alpha, cand.a1, cand.R2).r_alpha);
        return std::make_pair(inside ? 0 : 1, r);
    };
    const auto best = *std::min_element(cands.begin(), cands.end(),
                                        [&](const auto& x, const auto& y) { return score(x) < score(y); });
    out.box_radius_squared = best.R2;
    out.physical = score(best).first == 0;
    if (best.R2 > 0.0) {
        out.solution = make_confined_solution(out.params, out.channel, out.sign, best.R2, best.a1);
        out.residuals = constraint_residuals(*out.solution);
    } else {
        const auto r = k1_confined_residuals(out.params, L, alpha, best.a1, best.R2);
        out.residuals = {{"a1", r.r_a1}, {"box_radius", r.r_R2}, {"alpha", r.r_alpha}};
    }
    if (!out.physical) {
        out.notes = "prefactor node not inside a physical box";
    }
    return out;
}

json built_json(const Built& b, const std::string& command) {
    json res = json::object();
    for (const auto& [name, v] : b.residuals) {
        res[name] = std::isfinite(v) ? json(round_sig15(v)) : json(nullptr);
    }
    json j{{"command", command},
           {"L", b.channel.L().value()},
           {"confined", b.box_radius_squared.has_value() || (b.solution && b.solution->confined())},
           {"alpha_sign", b.sign},
           {"solution", b.solution ? json(*b.solution) : json(nullptr)},
           {"box_radius_squared",
            b.box_radius_squared ? json(round_sig15(*b.box_radius_squared)) : json(nullptr)},
           {"residuals", res},
           {"quasi_exact", b.quasi_exact()},
           {"physical", b.physical}};
    if (!b.notes.empty()) {
        j["notes"] = b.notes;
    }
    return j;
}

SolverConfig load_config(const std::string& path) {
    SolverConfig cfg;
    if (path.empty()) {
        return cfg;
    }
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot read config file " + path);
    }
    try {
        cfg = json::parse(in).get<SolverConfig>();
    } catch (const json::exception& e) {
        throw DomainError(std::string("invalid config file: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

int cmd_solve(const ParamFlags& f, std::ostream& out) {
    const Built b = build(f);
    out << built_json(b, "solve").dump(2) << "\n";
    return b.quasi_exact() && b.physical ? kOk : kNotQuasiExact;
}

int cmd_scan(const ParamFlags& f, const std::vector<int>& l_list, const SolverConfig& cfg,
             std::ostream& out) {
    ScanRequest req;
    req.a = f.a;
    req.c = f.c;
    req.dim = f.dim;
    req.l_list = l_list;
    req.k = f.k;
    req.confined = f.confined;
    req.alpha_sign = parse_alpha_sign(f.alpha_sign);
    req.config = cfg;
    const ScanResult result = scan_b(req);
    out << json(result).dump(2) << "\n";
    return kOk;
}

int cmd_verify(const ParamFlags& f, const std::string& method, std::optional<double> expected,
               std::optional<double> radius, const SolverConfig& cfg, std::ostream& out) {
    std::vector<Method> methods;
    if (method == "shooting") {
        methods = {Method::shooting};
    } else if (method == "fd") {
        methods = {Method::fd_matrix};
    } else if (method == "both") {
        methods = {Method::shooting, Method::fd_matrix};
    } else {
        throw DomainError("method must be shooting, fd or both");
    }

    std::optional<Built> b;
    try {
        b = build(f);
    } catch (const DegenerateError&) {
        // No closed form; the numerical oracle still applies.
    }
    const bool closed = b && b->quasi_exact() && b->physical && b->solution;

    std::vector<VerificationReport> reports;
    for (Method m : methods) {
        if (closed) {
            reports.push_back(verify_solution(*b->solution, m, cfg));
            continue;
        }
        std::optional<double> box;
        if (f.confined) {
            if (radius) {
                box = radius;
            } else if (b && b->solution && b->solution->box_radius) {
                box = b->solution->box_radius;
            } else {
                throw DomainError("confined verification without a closed form needs --radius");
            }
        }
        const PotentialParams p{f.a, f.b, f.c};
        const Channel ch{f.dim, f.l, f.k};
        reports.push_back(verify_numeric(p, ch, box, m, cfg, expected));
    }

    json j{{"command", "verify"}, {"closed_form", closed}, {"reports", reports}};
    if (reports.size() == 2) {
        const double e1 = reports[0].e_numeric, e2 = reports[1].e_numeric;
        const double rel = std::abs(e1 - e2) / (1.0 + std::abs(e1));
        j["cross_agreement"] = json{{"rel_diff", round_sig15(rel)}, {"within_1e-4", rel <= 1e-4}};
    }
    out << j.dump(2) << "\n";
    const bool failed = std::any_of(reports.begin(), reports.end(),
                                    [](const auto& r) { return r.status == Status::fail; });
    return failed ? kVerificationFailed : kOk;
}

int cmd_map(const ParamFlags& f, std::ostream& out) {
    ParamFlags g = f;
    g.confined = true;
    const Built b = build(g);
    if (b.sign > 0) {
        throw NotMappableError("alpha = +sqrt(a) is not normalizable on (0, inf)");
    }
    if (!(b.quasi_exact() && b.solution)) {
        out << built_json(b, "map").dump(2) << "\n";
        return kNotQuasiExact;
    }
    const QesSolution mapped = map_confined_to_unconfined(*b.solution);
    const double L = mapped.channel.L().value();
    json j{{"command", "map"},
           {"confined", *b.solution},
           {"unconfined", mapped},
           {"unconfined_residual",
            round_sig15(unconfined_constraint_residual(mapped.params, L, mapped.channel.k))}};
    out << j.dump(2) << "\n";
    return kOk;
}

int cmd_export(const ParamFlags& f, const std::string& path, int points, const SolverConfig& cfg,
               std::ostream& out, std::ostream& err) {
    const Built b = build(f);
    if (!(b.quasi_exact() && b.physical && b.solution)) {
        out << built_json(b, "export").dump(2) << "\n";
        return kNotQuasiExact;
    }
    const auto samples = sample_wavefunction(*b.solution, points, cfg);
    std::ofstream file(path);
    if (!file) {
        err << "cannot open " << path << " for writing\n";
        return kUnwritablePath;
    }
    file << "q,value\n";
    char buf[64];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof buf, "%.15g,%.15g\n", s.q, s.value);
        file << buf;
    }
    file.close();
    if (!file) {
        err << "write to " << path << " failed\n";
        return kUnwritablePath;
    }
    out << json{{"command", "export"}, {"out", path}, {"rows", samples.size()}}.dump(2) << "\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quasi-exact solutions of V(q) = a q^2 + b q^-4 + c q^-6"};
    app.require_subcommand(1);
    std::string config_path;
    bool quiet = false;
    app.add_option("--config", config_path, "JSON solver configuration");
    app.add_flag("--quiet", quiet, "suppress diagnostics on stderr");

    ParamFlags solve_f, scan_f, verify_f, map_f, export_f;
    std::vector<int> scan_l{0};
    std::string method = "shooting";
    std::optional<double> expected, radius;
    std::string out_path;
    int points = 200;

    auto* solve = app.add_subcommand("solve", "closed-form solution and constraint residuals");
    add_param_flags(solve, solve_f, true);
    solve->add_option("--l", solve_f.l, "orbital quantum number")->capture_default_str();

    auto* scan = app.add_subcommand("scan", "find every b admitting a closed form");
    add_param_flags(scan, scan_f, false);
    scan->add_option("--l", scan_l, "orbital quantum numbers, comma separated")->delimiter(',');

    auto* verify = app.add_subcommand("verify", "compare against the numerical eigenvalue");
    add_param_flags(verify, verify_f, true);
    verify->add_option("--l", verify_f.l, "orbital quantum number")->capture_default_str();
    verify->add_option("--method", method, "shooting, fd or both")->capture_default_str();
    verify->add_option("--expect-energy", expected, "reference energy when no closed form exists");
    verify->add_option("--radius", radius, "box radius when no closed form exists");

    auto* map = app.add_subcommand("map", "confined k solution to unconfined k+1 solution");
    add_param_flags(map, map_f, true);
    map->add_option("--l", map_f.l, "orbital quantum number")->capture_default_str();

    auto* exp = app.add_subcommand("export", "write wavefunction samples as CSV");
    add_param_flags(exp, export_f, true);
    exp->add_option("--l", export_f.l, "orbital quantum number")->capture_default_str();
    exp->add_option("--out", out_path, "CSV output path")->required();
    exp->add_option("--points", points, "number of samples (>= 2)")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        if (!quiet) err << e.what() << "\n";
        return kInvalidArguments;
    }

    try {
        const SolverConfig cfg = load_config(config_path);
        if (*solve) return cmd_solve(solve_f, out);
        if (*scan) return cmd_scan(scan_f, scan_l, cfg, out);
        if (*verify) return cmd_verify(verify_f, method, expected, radius, cfg, out);
        if (*map) return cmd_map(map_f, out);
        if (*exp) return cmd_export(export_f, out_path, points, cfg, out, err);
    } catch (const DomainError& e) {
        if (!quiet) err << "invalid input: " << e.what() << "\n";
        return kInvalidArguments;
    } catch (const NotMappableError& e) {
        if (!quiet) err << "not mappable: " << e.what() << "\n";
        return kInvalidArguments;
    } catch (const DegenerateError& e) {
        if (!quiet) err << "degenerate parameters: " << e.what() << "\n";
        return kDegenerate;
    } catch (const Error& e) {
        if (!quiet) err << "solver failure: " << e.what() << "\n";
        return kSolverFailure;
    }
    return kInvalidArguments;
}

}  // namespace qes::cli
