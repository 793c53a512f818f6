#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssprof/types.hpp"

namespace ssprof {

struct ConfigError : std::runtime_error {
    ConfigError(int line, const std::string& field, const std::string& msg)
        : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : "") +
                             (field.empty() ? "" : field + ": ") + msg),
          line(line),
          field(field) {}
    int line;
    std::string field;
};

struct GridSpec {
    std::size_t inner_count = 256;
    std::size_t outer_count = 512;
    double grading = 0.0;  // 0 = choose so r_min = delta * 1e-4
    double r_max = 0.0;    // 0 = 50 / delta
    bool operator==(const GridSpec&) const = default;
};

struct SolverSpec {
    double tol = 1e-11;
    int max_iter = 40;
    double smallness_threshold = 0.1;
    bool operator==(const SolverSpec&) const = default;
};

struct ResidualSpec {
    double tolerance = 1e-5;
    double window_lo_factor = 2.0;  // window_lo = factor * delta
    double window_hi_factor = 0.5;  // window_hi = factor * r_max
    bool operator==(const ResidualSpec&) const = default;
};

struct FitSpec {
    double window_factor = 0.6;  // fit window [factor * r_max, r_max]
    double rate_tolerance = 0.05;
    bool operator==(const FitSpec&) const = default;
};

struct AuditSpec {
    double eps = 0.5;
    double threshold = 1e-3;
    double r_max = 100.0;
    std::string candidate = "zero";  // bundled name or csv path
    bool operator==(const AuditSpec&) const = default;
};

struct ScanSpec {
    std::string spec;  // "key,min,max,count,scale;..." cartesian lattice
    int jobs = 1;
    bool operator==(const ScanSpec&) const = default;
};

struct RunConfig {
    std::string command;  // solve-expander | verify-residuals | scan | shrinker-audit | constants
    PhysicalParams physics;
    BoundaryData boundary;
    GridSpec grid;
    SolverSpec solver;
    ResidualSpec residual;
    FitSpec fit;
    AuditSpec audit;
    ScanSpec scan;
    std::string input_profile;
    std::string output_dir = "out";

    bool operator==(const RunConfig&) const = default;
};

// Line-oriented "section.key = value" document; '#' starts a comment. A bare
// key is accepted when it matches exactly one registered key's last segment.
// Unknown keys and malformed lines throw ConfigError with the line number;
// out-of-range values throw ConfigError naming the field.
RunConfig parse_config(const std::string& text);

// One "key = value" assignment, as used for --key=value overrides.
void apply_config_line(RunConfig& cfg, const std::string& line, int lineno);

// Canonical document: every key, fixed order, 17 significant digits.
std::string emit_config(const RunConfig& cfg);

// Post-parse validation of the whole config (also run by parse_config).
void validate_config(const RunConfig& cfg);

// Derived grid quantities with the auto defaults resolved.
double effective_r_max(const RunConfig& cfg);
double effective_grading(const RunConfig& cfg);

}  // namespace ssprof
