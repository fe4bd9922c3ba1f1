#include "qes/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "qes/errors.hpp"

namespace qes {

namespace {

json real(double v) {
    if (!std::isfinite(v)) {
        return nullptr;
    }
    return round_sig15(v);
}

json optional_real(const std::optional<double>& v) { return v ? real(*v) : json(nullptr); }

json alpha_sign_json(AlphaSign s) {
    switch (s) {
        case AlphaSign::minus: return -1;
        case AlphaSign::plus: return 1;
        default: return "both";
    }
}

AlphaSign alpha_sign_from(const json& j) {
    if (j.is_string() && j.get<std::string>() == "both") {
        return AlphaSign::both;
    }
    if (j.is_number_integer()) {
        const int v = j.get<int>();
        if (v == -1) return AlphaSign::minus;
        if (v == 1) return AlphaSign::plus;
    }
    throw DomainError("alpha_sign must be -1, 1 or \"both\"");
}

}  // namespace

double round_sig15(double v) {
    if (!std::isfinite(v) || v == 0.0) {
        return v;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return std::strtod(buf, nullptr);
}

void to_json(json& j, const PotentialParams& p) {
    j = json{{"a", real(p.a)}, {"b", real(p.b)}, {"c", real(p.c)}};
}

void from_json(const json& j, PotentialParams& p) {
    p.a = j.at("a").get<double>();
    p.b = j.at("b").get<double>();
    p.c = j.at("c").get<double>();
}

void to_json(json& j, const Channel& c) {
    j = json{{"dim", c.dim}, {"l", c.l}, {"k", c.k}, {"L", c.L().value()}};
}

void from_json(const json& j, Channel& c) {
    c.dim = j.at("dim").get<int>();
    c.l = j.at("l").get<int>();
    c.k = j.at("k").get<int>();
}

void to_json(json& j, const AnsatzExponents& e) {
    j = json{{"alpha", real(e.alpha)}, {"beta", real(e.beta)}, {"delta", real(e.delta)}};
}

void from_json(const json& j, AnsatzExponents& e) {
    e.alpha = j.at("alpha").get<double>();
    e.beta = j.at("beta").get<double>();
    e.delta = j.at("delta").get<double>();
}

void to_json(json& j, const PrefactorPoly& f) {
    json coeffs = json::array();
    for (double v : f.coeffs) {
        coeffs.push_back(real(v));
    }
    j = json{{"degree_k", f.degree_k}, {"coeffs", coeffs}, {"g", optional_real(f.g)}};
}

void from_json(const json& j, PrefactorPoly& f) {
    f.degree_k = j.at("degree_k").get<int>();
    f.coeffs = j.at("coeffs").get<std::vector<double>>();
    f.g.reset();
    if (j.contains("g") && !j.at("g").is_null()) {
        f.g = j.at("g").get<double>();
    }
}

void to_json(json& j, const QesSolution& s) {
    j = json{{"params", s.params},     {"channel", s.channel}, {"exponents", s.exponents},
             {"prefactor", s.prefactor}, {"energy", real(s.energy)},
             {"box_radius", optional_real(s.box_radius)}};
}

void from_json(const json& j, QesSolution& s) {
    s.params = j.at("params").get<PotentialParams>();
    s.channel = j.at("channel").get<Channel>();
    s.exponents = j.at("exponents").get<AnsatzExponents>();
    s.prefactor = j.at("prefactor").get<PrefactorPoly>();
    s.energy = j.at("energy").get<double>();
    s.box_radius.reset();
    if (j.contains("box_radius") && !j.at("box_radius").is_null()) {
        s.box_radius = j.at("box_radius").get<double>();
    }
}

void to_json(json& j, const WavefunctionSample& s) {
    j = json{{"q", real(s.q)}, {"value", real(s.value)}};
}

void from_json(const json& j, WavefunctionSample& s) {
    s.q = j.at("q").get<double>();
    s.value = j.at("value").get<double>();
}

void to_json(json& j, const SolverConfig& c) {
    j = json{{"q_min_factor", real(c.q_min_factor)},
             {"q_max_factor", real(c.q_max_factor)},
             {"grid_points", c.grid_points},
             {"energy_tol", real(c.energy_tol)},
             {"residual_tol", real(c.residual_tol)},
             {"bracket_range", real(c.bracket_range)},
             {"bracket_steps", c.bracket_steps}};
}

void from_json(const json& j, SolverConfig& c) {
    c.q_min_factor = j.value("q_min_factor", c.q_min_factor);
    c.q_max_factor = j.value("q_max_factor", c.q_max_factor);
    c.grid_points = j.value("grid_points", c.grid_points);
    c.energy_tol = j.value("energy_tol", c.energy_tol);
    c.residual_tol = j.value("residual_tol", c.residual_tol);
    c.bracket_range = j.value("bracket_range", c.bracket_range);
    c.bracket_steps = j.value("bracket_steps", c.bracket_steps);
}

void to_json(json& j, const ScanRequest& r) {
    j = json{{"a", real(r.a)},
             {"c", real(r.c)},
             {"dim", r.dim},
             {"l_list", r.l_list},
             {"k", r.k},
             {"confined", r.confined},
             {"alpha_sign", alpha_sign_json(r.alpha_sign)},
             {"config", r.config}};
}

void from_json(const json& j, ScanRequest& r) {
    r.a = j.at("a").get<double>();
    r.c = j.at("c").get<double>();
    r.dim = j.at("dim").get<int>();
    r.l_list = j.at("l_list").get<std::vector<int>>();
    r.k = j.at("k").get<int>();
    r.confined = j.value("confined", false);
    r.alpha_sign = j.contains("alpha_sign") ? alpha_sign_from(j.at("alpha_sign")) : AlphaSign::minus;
    r.config = j.contains("config") ? j.at("config").get<SolverConfig>() : SolverConfig{};
}

void to_json(json& j, const ScanResult& r) {
    json rejected = json::array();
    for (const auto& x : r.diagnostics.rejected) {
        rejected.push_back(json{{"b", real(x.b)}, {"l", x.l}, {"alpha_sign", x.alpha_sign},
                                {"reason", x.reason}});
    }
    j = json{{"request", r.request},
             {"solutions", r.solutions},
             {"diagnostics",
              json{{"cells_scanned", r.diagnostics.cells_scanned},
                   {"sign_changes", r.diagnostics.sign_changes},
                   {"singular_cells", r.diagnostics.singular_cells},
                   {"rejected", rejected}}}};
}

void to_json(json& j, const VerificationReport& r) {
    j = json{{"e_closed", real(r.e_closed)},     {"e_numeric", real(r.e_numeric)},
             {"rel_error", real(r.rel_error)},   {"residual_norm", real(r.residual_norm)},
             {"node_count", r.node_count},       {"method", to_string(r.method)},
             {"status", to_string(r.status)},    {"notes", r.notes}};
}

}  // namespace qes
