#include "ssprof/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "ssprof/grid.hpp"

namespace ssprof {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(line, key, "cannot parse '" + v + "' as a number");
    }
}

long to_long(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(line, key, "cannot parse '" + v + "' as an integer");
    }
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct KeyEntry {
    const char* key;
    std::function<void(RunConfig&, const std::string&, int)> set;
    std::function<std::string(const RunConfig&)> get;
};

const std::vector<KeyEntry>& registry() {
    static const std::vector<KeyEntry> table = {
        {"physics.d",
         [](RunConfig& c, const std::string& v, int l) {
             c.physics.d = static_cast<int>(to_long(v, "physics.d", l));
         },
         [](const RunConfig& c) { return std::to_string(c.physics.d); }},
        {"physics.alpha",
         [](RunConfig& c, const std::string& v, int l) { c.physics.alpha = to_double(v, "physics.alpha", l); },
         [](const RunConfig& c) { return fmt(c.physics.alpha); }},
        {"physics.c_v",
         [](RunConfig& c, const std::string& v, int l) { c.physics.c_v = to_double(v, "physics.c_v", l); },
         [](const RunConfig& c) { return fmt(c.physics.c_v); }},
        {"physics.kappa",
         [](RunConfig& c, const std::string& v, int l) { c.physics.kappa = to_double(v, "physics.kappa", l); },
         [](const RunConfig& c) { return fmt(c.physics.kappa); }},
        {"physics.gas_r",
         [](RunConfig& c, const std::string& v, int l) { c.physics.gas_r = to_double(v, "physics.gas_r", l); },
         [](const RunConfig& c) { return fmt(c.physics.gas_r); }},
        {"physics.mu0",
         [](RunConfig& c, const std::string& v, int l) { c.physics.mu0 = to_double(v, "physics.mu0", l); },
         [](const RunConfig& c) { return fmt(c.physics.mu0); }},
        {"physics.lambda0",
         [](RunConfig& c, const std::string& v, int l) { c.physics.lambda0 = to_double(v, "physics.lambda0", l); },
         [](const RunConfig& c) { return fmt(c.physics.lambda0); }},
        {"boundary.a_slope",
         [](RunConfig& c, const std::string& v, int l) { c.boundary.a_slope = to_double(v, "boundary.a_slope", l); },
         [](const RunConfig& c) { return fmt(c.boundary.a_slope); }},
        {"boundary.delta",
         [](RunConfig& c, const std::string& v, int l) { c.boundary.delta = to_double(v, "boundary.delta", l); },
         [](const RunConfig& c) { return fmt(c.boundary.delta); }},
        {"boundary.p_delta",
         [](RunConfig& c, const std::string& v, int l) { c.boundary.p_delta = to_double(v, "boundary.p_delta", l); },
         [](const RunConfig& c) { return fmt(c.boundary.p_delta); }},
        {"boundary.theta0",
         [](RunConfig& c, const std::string& v, int l) { c.boundary.theta0 = to_double(v, "boundary.theta0", l); },
         [](const RunConfig& c) { return fmt(c.boundary.theta0); }},
        {"boundary.eps_norm",
         [](RunConfig& c, const std::string& v, int l) { c.boundary.eps_norm = to_double(v, "boundary.eps_norm", l); },
         [](const RunConfig& c) { return fmt(c.boundary.eps_norm); }},
        {"grid.inner_count",
         [](RunConfig& c, const std::string& v, int l) {
             c.grid.inner_count = static_cast<std::size_t>(to_long(v, "grid.inner_count", l));
         },
         [](const RunConfig& c) { return std::to_string(c.grid.inner_count); }},
        {"grid.outer_count",
         [](RunConfig& c, const std::string& v, int l) {
             c.grid.outer_count = static_cast<std::size_t>(to_long(v, "grid.outer_count", l));
         },
         [](const RunConfig& c) { return std::to_string(c.grid.outer_count); }},
        {"grid.grading",
         [](RunConfig& c, const std::string& v, int l) { c.grid.grading = to_double(v, "grid.grading", l); },
         [](const RunConfig& c) { return fmt(c.grid.grading); }},
        {"grid.r_max",
         [](RunConfig& c, const std::string& v, int l) { c.grid.r_max = to_double(v, "grid.r_max", l); },
         [](const RunConfig& c) { return fmt(c.grid.r_max); }},
        {"solver.tol",
         [](RunConfig& c, const std::string& v, int l) { c.solver.tol = to_double(v, "solver.tol", l); },
         [](const RunConfig& c) { return fmt(c.solver.tol); }},
        {"solver.max_iter",
         [](RunConfig& c, const std::string& v, int l) {
             c.solver.max_iter = static_cast<int>(to_long(v, "solver.max_iter", l));
         },
         [](const RunConfig& c) { return std::to_string(c.solver.max_iter); }},
        {"solver.smallness_threshold",
         [](RunConfig& c, const std::string& v, int l) {
             c.solver.smallness_threshold = to_double(v, "solver.smallness_threshold", l);
         },
         [](const RunConfig& c) { return fmt(c.solver.smallness_threshold); }},
        {"residual.tolerance",
         [](RunConfig& c, const std::string& v, int l) { c.residual.tolerance = to_double(v, "residual.tolerance", l); },
         [](const RunConfig& c) { return fmt(c.residual.tolerance); }},
        {"residual.window_lo_factor",
         [](RunConfig& c, const std::string& v, int l) {
             c.residual.window_lo_factor = to_double(v, "residual.window_lo_factor", l);
         },
         [](const RunConfig& c) { return fmt(c.residual.window_lo_factor); }},
        {"residual.window_hi_factor",
         [](RunConfig& c, const std::string& v, int l) {
             c.residual.window_hi_factor = to_double(v, "residual.window_hi_factor", l);
         },
         [](const RunConfig& c) { return fmt(c.residual.window_hi_factor); }},
        {"fit.window_factor",
         [](RunConfig& c, const std::string& v, int l) { c.fit.window_factor = to_double(v, "fit.window_factor", l); },
         [](const RunConfig& c) { return fmt(c.fit.window_factor); }},
        {"fit.rate_tolerance",
         [](RunConfig& c, const std::string& v, int l) { c.fit.rate_tolerance = to_double(v, "fit.rate_tolerance", l); },
         [](const RunConfig& c) { return fmt(c.fit.rate_tolerance); }},
        {"audit.eps",
         [](RunConfig& c, const std::string& v, int l) { c.audit.eps = to_double(v, "audit.eps", l); },
         [](const RunConfig& c) { return fmt(c.audit.eps); }},
        {"audit.threshold",
         [](RunConfig& c, const std::string& v, int l) { c.audit.threshold = to_double(v, "audit.threshold", l); },
         [](const RunConfig& c) { return fmt(c.audit.threshold); }},
        {"audit.r_max",
         [](RunConfig& c, const std::string& v, int l) { c.audit.r_max = to_double(v, "audit.r_max", l); },
         [](const RunConfig& c) { return fmt(c.audit.r_max); }},
        {"audit.candidate",
         [](RunConfig& c, const std::string& v, int) { c.audit.candidate = v; },
         [](const RunConfig& c) { return c.audit.candidate; }},
        {"scan.spec", [](RunConfig& c, const std::string& v, int) { c.scan.spec = v; },
         [](const RunConfig& c) { return c.scan.spec; }},
        {"scan.jobs",
         [](RunConfig& c, const std::string& v, int l) {
             c.scan.jobs = static_cast<int>(to_long(v, "scan.jobs", l));
         },
         [](const RunConfig& c) { return std::to_string(c.scan.jobs); }},
        {"input.profile", [](RunConfig& c, const std::string& v, int) { c.input_profile = v; },
         [](const RunConfig& c) { return c.input_profile; }},
        {"output.dir", [](RunConfig& c, const std::string& v, int) { c.output_dir = v; },
         [](const RunConfig& c) { return c.output_dir; }},
    };
    return table;
}

const KeyEntry* find_key(const std::string& key, int line) {
    for (const auto& e : registry())
        if (key == e.key) return &e;
    // bare key: unique suffix match on the last segment
    const KeyEntry* found = nullptr;
    for (const auto& e : registry()) {
        const std::string full = e.key;
        const auto dot = full.find('.');
        if (full.substr(dot + 1) == key) {
            if (found) throw ConfigError(line, key, "ambiguous key");
            found = &e;
        }
    }
    if (!found) throw ConfigError(line, key, "unknown key");
    return found;
}

}  // namespace

void apply_config_line(RunConfig& cfg, const std::string& raw, int lineno) {
    const auto eq = raw.find('=');
    if (eq == std::string::npos)
        throw ConfigError(lineno, "", "expected 'section.key = value' in '" + trim(raw) + "'");
    const std::string key = trim(raw.substr(0, eq));
    const std::string value = trim(raw.substr(eq + 1));
    if (key.empty()) throw ConfigError(lineno, "", "empty key");
    if (value.empty()) throw ConfigError(lineno, key, "empty value");
    find_key(key, lineno)->set(cfg, value, lineno);
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        apply_config_line(cfg, line, lineno);
    }
    if (cfg.physics.alpha == 1.0)
        cfg.boundary.theta0 = BoundaryData::forced_theta0(cfg.physics, cfg.boundary.a_slope);
    validate_config(cfg);
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    for (const auto& msg : validate(cfg.physics)) throw ConfigError(0, "", msg);
    for (const auto& msg : validate(cfg.boundary, cfg.physics)) throw ConfigError(0, "", msg);
    if (cfg.grid.inner_count < 16 || cfg.grid.outer_count < 16)
        throw ConfigError(0, "grid", "node counts must be >= 16");
    if (cfg.grid.grading != 0.0 && !(cfg.grid.grading >= 1.0 && cfg.grid.grading <= 2.0))
        throw ConfigError(0, "grid.grading", "must be 0 (auto) or in [1, 2]");
    if (cfg.grid.r_max != 0.0 && !(cfg.grid.r_max > cfg.boundary.delta))
        throw ConfigError(0, "grid.r_max", "must exceed boundary.delta");
    if (!(cfg.solver.tol > 0.0)) throw ConfigError(0, "solver.tol", "must be positive");
    if (cfg.solver.max_iter < 1) throw ConfigError(0, "solver.max_iter", "must be >= 1");
    if (!(cfg.solver.smallness_threshold > 0.0))
        throw ConfigError(0, "solver.smallness_threshold", "must be positive");
    if (!(cfg.residual.tolerance > 0.0))
        throw ConfigError(0, "residual.tolerance", "must be positive");
    if (!(cfg.fit.window_factor > 0.0 && cfg.fit.window_factor < 1.0))
        throw ConfigError(0, "fit.window_factor", "must lie in (0, 1)");
    if (!(cfg.fit.rate_tolerance > 0.0))
        throw ConfigError(0, "fit.rate_tolerance", "must be positive");
    if (!(cfg.audit.eps > 0.0)) throw ConfigError(0, "audit.eps", "must be positive");
    if (!(cfg.audit.threshold > 0.0)) throw ConfigError(0, "audit.threshold", "must be positive");
    if (!(cfg.audit.r_max > 2.0 * cfg.audit.eps))
        throw ConfigError(0, "audit.r_max", "must exceed 2 * audit.eps (cutoff support)");
    if (cfg.scan.jobs < 1) throw ConfigError(0, "scan.jobs", "must be >= 1");
}

std::string emit_config(const RunConfig& cfg) {
    std::string out;
    for (const auto& e : registry()) {
        const std::string v = e.get(cfg);
        if (v.empty()) continue;
        out += e.key;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

double effective_r_max(const RunConfig& cfg) {
    return cfg.grid.r_max > 0.0 ? cfg.grid.r_max : 50.0 / cfg.boundary.delta;
}

double effective_grading(const RunConfig& cfg) {
    return cfg.grid.grading > 0.0 ? cfg.grid.grading
                                  : grading_for_rmin(cfg.grid.inner_count, 1e-4);
}

}  // namespace ssprof
