#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qes/model.hpp"

namespace qes {

enum class AlphaSign { minus = -1, both = 0, plus = 1 };

struct ScanRequest {
    double a = 1.0;
    double c = 1.0;
    int dim = 3;
    std::vector<int> l_list{0};
    int k = 0;
    bool confined = false;
    AlphaSign alpha_sign = AlphaSign::minus;
    SolverConfig config;

    void validate() const;
};

/// A sign change that refined to a root but was not reported as a solution.
struct RejectedRoot {
    double b = 0.0;
    int l = 0;
    int alpha_sign = -1;
    std::string reason;
};

struct ScanDiagnostics {
    int cells_scanned = 0;
    int sign_changes = 0;
    int singular_cells = 0;
    std::vector<RejectedRoot> rejected;
};

struct ScanResult {
    ScanRequest request;
    std::vector<QesSolution> solutions;
    ScanDiagnostics diagnostics;
};

/// Named constraint residuals of a closed-form record; every entry is zero
/// for a genuine quasi-exact solution.
std::vector<std::pair<std::string, double>> constraint_residuals(const QesSolution& sol);

/// Largest |residual| in constraint_residuals(sol).
double max_constraint_residual(const QesSolution& sol);

/// Finds every b in [-bracket_range, bracket_range] for which the requested
/// closed form exists and is physical (right node count, positive R^2).
ScanResult scan_b(const ScanRequest& request);

std::vector<ScanResult> enumerate_table(const std::vector<ScanRequest>& requests);

}  // namespace qes
