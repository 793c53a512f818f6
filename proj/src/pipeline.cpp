#include "ssprof/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "ssprof/fixed_point.hpp"
#include "ssprof/residual.hpp"
#include "ssprof/shrinker_energy.hpp"

namespace ssprof {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

fs::path output_dir(const RunConfig& cfg) {
    const char* env = std::getenv("SSPROFILE_OUT");
    fs::path dir = env && *env ? fs::path(env) : fs::path(cfg.output_dir);
    fs::create_directories(dir);
    return dir;
}

std::string profile_csv_string(const ProfileTriple& p) {
    std::ostringstream os;
    write_profile_csv(p, os);
    return os.str();
}

json smallness_json(const SmallnessReport& s) {
    json j;
    j["composite"] = s.composite;
    j["threshold"] = s.threshold;
    j["pass"] = s.pass;
    j["division_by_zero"] = s.division_by_zero;
    if (s.regime == Regime::expander_alpha_lt_1) {
        j["terms"] = {{"a", s.a},
                      {"p_delta", s.p_delta},
                      {"delta", s.delta},
                      {"pd_delta2", s.pd_delta2},
                      {"pd_theta0_over_a", s.pd_theta0_over_a},
                      {"a_delta_over_theta0", s.a_delta_over_theta0},
                      {"a2_over_theta0", s.a2_over_theta0},
                      {"p_delta_a", s.p_delta_a}};
    } else {
        j["terms"] = {{"a_log_inv_delta", s.a_log_inv_delta},
                      {"p_delta", s.p_delta},
                      {"delta", s.delta}};
    }
    return j;
}

json constants_json(const ConstantsSearch& cs) {
    json j;
    j["feasible"] = cs.feasible;
    j["m1"] = cs.consts.m1;
    j["m1p"] = cs.consts.m1p;
    j["m2"] = cs.consts.m2;
    j["min_slack"] = cs.min_slack;
    j["tightest"] = cs.tightest;
    json checks = json::array();
    for (const auto& c : cs.checks)
        checks.push_back({{"name", c.name},
                          {"lhs", c.lhs},
                          {"rhs", c.rhs},
                          {"slack", c.slack},
                          {"pass", c.pass}});
    j["checks"] = checks;
    return j;
}

json audit_json(const AuditReport& rep) {
    json j;
    json hy = json::array();
    for (const auto& h : rep.hypotheses)
        hy.push_back(
            {{"name", h.name}, {"value", h.value}, {"threshold", h.threshold}, {"pass", h.pass}});
    j["hypotheses"] = hy;
    j["hypotheses_pass"] = rep.hypotheses_pass;
    j["cavitation"] = {{"eps", rep.cavitation.eps},
                       {"p_eps", rep.cavitation.p_eps},
                       {"lambda_cap", rep.cavitation.lambda_cap},
                       {"ratio1_sup", rep.cavitation.ratio1_sup},
                       {"ratio2_sup", rep.cavitation.ratio2_sup}};
    j["qbounds"] = {{"all_pass", rep.qbounds.all_pass},
                    {"b_sup", rep.qbounds.b_sup},
                    {"sup_pa_theta", rep.qbounds.sup_pa_theta},
                    {"failures", rep.qbounds.failures}};
    const EnergyLedger& l = rep.ledger;
    j["ledger"] = {{"lhs1", l.lhs1},
                   {"lhs2", l.lhs2},
                   {"lhs_exact", l.lhs_exact},
                   {"lhs_lower", l.lhs_lower},
                   {"rhs1", l.rhs1},
                   {"rhs2", l.rhs2},
                   {"rhs3", l.rhs3},
                   {"rhs_exact", l.rhs_exact},
                   {"rhs_upper", l.rhs_upper},
                   {"sub_integrals",
                    {{"r11", l.r11},
                     {"r12s", l.r12s},
                     {"r12l", l.r12l},
                     {"r21", l.r21},
                     {"r22_diag", l.r22_diag},
                     {"r22_cross", l.r22_cross},
                     {"r23s", l.r23s},
                     {"r23l", l.r23l},
                     {"n1", l.n1_part},
                     {"n2", l.n2_part}}},
                   {"hardy_constant", l.hardy_constant},
                   {"cutoff_split_error", l.cutoff_split_error},
                   {"tail_estimate", l.tail_estimate}};
    j["verdict"] = rep.verdict;
    j["margin"] = rep.margin;
    return j;
}

std::string residual_csv(const ResidualReport& rr) {
    std::string out = "r,res_mass,res_mom,res_energy\n";
    for (std::size_t i = 0; i < rr.r.size(); ++i) {
        out += fmt17(rr.r[i]);
        out += ',';
        out += fmt17(rr.eq_mass[i]);
        out += ',';
        out += fmt17(rr.eq_momentum[i]);
        out += ',';
        out += fmt17(rr.eq_energy[i]);
        out += '\n';
    }
    return out;
}

json residual_json(const ResidualReport& rr) {
    return json{{"max_rel_mass", rr.max_rel_mass},
                {"max_rel_momentum", rr.max_rel_momentum},
                {"max_rel_energy", rr.max_rel_energy},
                {"max_abs_mass", rr.max_abs_mass},
                {"max_abs_momentum", rr.max_abs_momentum},
                {"max_abs_energy", rr.max_abs_energy},
                {"window", {rr.window_lo, rr.window_hi}}};
}

RadialGrid grid_from(const RunConfig& cfg) {
    return build_grid(cfg.boundary.delta, effective_r_max(cfg), cfg.grid.inner_count,
                      cfg.grid.outer_count, effective_grading(cfg));
}

int run_solve_expander(const RunConfig& cfg) {
    const fs::path dir = output_dir(cfg);
    const double r_max = effective_r_max(cfg);
    const RadialGrid grid = grid_from(cfg);

    PicardOptions opt;
    opt.tol = cfg.solver.tol;
    opt.max_iter = cfg.solver.max_iter;
    opt.smallness_threshold = cfg.solver.smallness_threshold;
    const PicardResult pr = picard_solve(cfg.physics, cfg.boundary, grid, opt);

    std::string iter_lines;
    for (const auto& st : pr.history) {
        json j{{"iter", st.iterate_index},
               {"distance", st.norm_distance},
               {"contraction", st.contraction_estimate}};
        iter_lines += j.dump();
        iter_lines += '\n';
    }
    write_file_atomic((dir / "iterations.jsonl").string(), iter_lines);

    json report;
    report["command"] = "solve-expander";
    report["smallness"] = smallness_json(pr.smallness);
    report["picard"] = {{"status", static_cast<int>(pr.status)},
                        {"converged", pr.converged()},
                        {"iterations", pr.history.size()},
                        {"message", pr.message}};

    if (!pr.converged()) {
        report["verdicts"] = {{"all_pass", false}};
        write_file_atomic((dir / "report.json").string(), report.dump(2) + "\n");
        std::cerr << "solve-expander: picard failed: " << pr.message << "\n";
        return 1;
    }

    const ProfileTriple global =
        extend_global(pr.inner, cfg.physics, r_max, cfg.grid.outer_count);
    write_file_atomic((dir / "profile.csv").string(), profile_csv_string(global));

    const double wlo = cfg.residual.window_lo_factor * cfg.boundary.delta;
    const double whi = cfg.residual.window_hi_factor * r_max;
    const ResidualReport rr = residual_expander(global, cfg.physics, wlo, whi);
    write_file_atomic((dir / "residual.csv").string(), residual_csv(rr));
    const double max_rel =
        std::max({rr.max_rel_mass, rr.max_rel_momentum, rr.max_rel_energy});
    report["residual"] = residual_json(rr);

    const AsymptoticFit fit =
        fit_asymptotics(global, cfg.fit.window_factor * r_max, r_max);
    report["asymptotics"] = {{"p_inf", fit.p_inf},       {"u_inf", fit.u_inf},
                             {"theta_inf", fit.theta_inf}, {"rate_p", fit.rate_p},
                             {"rate_u", fit.rate_u},      {"rate_theta", fit.rate_theta},
                             {"window", {fit.r_lo, fit.r_hi}}};
    const double rate_tol = 2.0 * cfg.fit.rate_tolerance;
    const bool rates_ok = std::abs(fit.rate_p - 2.0) <= rate_tol &&
                          std::abs(fit.rate_u - 2.0) <= rate_tol &&
                          std::abs(fit.rate_theta - 2.0) <= rate_tol;
    const bool limits_ok = fit.p_inf > 0.0 && fit.u_inf > 0.0 && fit.theta_inf > 0.0;

    const EnvelopeReport env = measure_envelopes(global, cfg.physics, cfg.boundary);
    report["envelopes"] = {{"c_u", env.c_u},
                           {"c_uprime", env.c_uprime},
                           {"c_theta", env.c_theta},
                           {"c_thetaprime", env.c_thetaprime},
                           {"p_lo", env.p_lo},
                           {"p_hi", env.p_hi},
                           {"theta_nonneg", env.theta_nonneg},
                           {"finite", env.finite}};

    const ConstantsSearch cs = find_bootstrap_constants(cfg.physics, cfg.boundary);
    report["constants"] = constants_json(cs);
    bool monitor_ok = true;
    if (cs.feasible) {
        // Z scales inversely with the constants, so the monitor runs at the
        // feasible corner minimizing its weights, not the slack-balanced point
        const ConstantsSearch mc = find_monitor_constants(cfg.physics, cfg.boundary);
        report["monitor_constants"] = constants_json(mc);
        const ZMonitorResult zm = bootstrap_monitor(global, mc.consts, cfg.boundary, cfg.physics);
        report["monitor"] = {{"z_delta", zm.z_delta}, {"z_sup", zm.z_sup}, {"verdict", zm.verdict}};
        monitor_ok = zm.verdict;
    } else {
        report["monitor"] = {{"skipped", "constant chain infeasible for these parameters"}};
    }

    // plot data: profiles and bound curves with the measured constants
    std::string plot =
        "r,P,U,Theta,Uprime,Thetaprime,env_u,env_uprime,env_theta,env_thetaprime,p_lo,p_hi\n";
    for (std::size_t i = 0; i < global.size(); ++i) {
        const double r = global.grid.nodes[i];
        const double shape = density_shape(r, cfg.physics, cfg.boundary);
        plot += fmt17(r);
        plot += ',';
        plot += fmt17(global.p[i]);
        plot += ',';
        plot += fmt17(global.u[i]);
        plot += ',';
        plot += fmt17(global.theta[i]);
        plot += ',';
        plot += fmt17(global.u_prime[i]);
        plot += ',';
        plot += fmt17(global.theta_prime[i]);
        plot += ',';
        plot += fmt17(env.c_u * envelope_u(r, cfg.physics, cfg.boundary));
        plot += ',';
        plot += fmt17(env.c_uprime * envelope_uprime(r, cfg.physics, cfg.boundary));
        plot += ',';
        plot += fmt17(env.c_theta * envelope_theta(r, cfg.boundary));
        plot += ',';
        plot += fmt17(env.c_thetaprime * envelope_thetaprime(r, cfg.boundary));
        plot += ',';
        plot += fmt17(env.p_lo * shape);
        plot += ',';
        plot += fmt17(env.p_hi * shape);
        plot += '\n';
    }
    write_file_atomic((dir / "plotdata.csv").string(), plot);

    const bool residual_ok = max_rel <= cfg.residual.tolerance;
    const bool all_pass = residual_ok && rates_ok && limits_ok && env.finite &&
                          env.theta_nonneg && monitor_ok;
    report["verdicts"] = {{"residual", residual_ok}, {"rates", rates_ok},
                          {"limits_positive", limits_ok}, {"envelopes_finite", env.finite},
                          {"theta_nonneg", env.theta_nonneg}, {"monitor", monitor_ok},
                          {"all_pass", all_pass}};
    write_file_atomic((dir / "report.json").string(), report.dump(2) + "\n");
    return all_pass ? 0 : 1;
}

int run_verify_residuals(const RunConfig& cfg) {
    const fs::path dir = output_dir(cfg);
    if (cfg.input_profile.empty())
        throw ConfigError(0, "input.profile", "verify-residuals needs an input profile");
    std::ifstream in(cfg.input_profile);
    if (!in) throw ConfigError(0, "input.profile", "cannot open " + cfg.input_profile);
    const ProfileTriple profile = read_profile_csv(in);
    const double wlo = cfg.residual.window_lo_factor * profile.grid.nodes.front();
    const double whi = cfg.residual.window_hi_factor * profile.grid.nodes.back();
    const ResidualReport rr = residual_expander(profile, cfg.physics, wlo, whi);
    write_file_atomic((dir / "residual.csv").string(), residual_csv(rr));
    json j = residual_json(rr);
    const double max_rel =
        std::max({rr.max_rel_mass, rr.max_rel_momentum, rr.max_rel_energy});
    j["pass"] = max_rel <= cfg.residual.tolerance;
    write_file_atomic((dir / "residual_summary.json").string(), j.dump(2) + "\n");
    return max_rel <= cfg.residual.tolerance ? 0 : 1;
}

struct ScanPoint {
    std::vector<std::pair<std::string, double>> assignment;
    bool smallness_pass = false;
    bool constants_feasible = false;
    std::string picard_status;
    std::size_t iterations = 0;
    double final_distance = 0.0;
    std::string error;
};

std::vector<std::vector<double>> lattice_values(const std::string& spec,
                                                std::vector<std::string>& keys) {
    std::vector<std::vector<double>> axes;
    std::istringstream clauses(spec);
    std::string clause;
    while (std::getline(clauses, clause, ';')) {
        std::istringstream fields(clause);
        std::string key, smin, smax, scount, scale;
        if (!std::getline(fields, key, ',') || !std::getline(fields, smin, ',') ||
            !std::getline(fields, smax, ',') || !std::getline(fields, scount, ',') ||
            !std::getline(fields, scale, ','))
            throw ConfigError(0, "scan.spec", "clause needs key,min,max,count,scale");
        const double lo = std::stod(smin), hi = std::stod(smax);
        const int count = std::stoi(scount);
        if (count < 1) throw ConfigError(0, "scan.spec", "count must be >= 1");
        std::vector<double> vals;
        for (int i = 0; i < count; ++i) {
            const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
            vals.push_back(scale == "log" ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
        }
        keys.push_back(key);
        axes.push_back(std::move(vals));
    }
    if (axes.empty()) throw ConfigError(0, "scan.spec", "empty lattice");
    return axes;
}

int run_scan(const RunConfig& cfg) {
    const fs::path dir = output_dir(cfg);
    std::vector<std::string> keys;
    const auto axes = lattice_values(cfg.scan.spec, keys);

    std::size_t total = 1;
    for (const auto& a : axes) total *= a.size();
    std::vector<ScanPoint> points(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        for (std::size_t k = 0; k < axes.size(); ++k) {
            points[idx].assignment.emplace_back(keys[k], axes[k][rem % axes[k].size()]);
            rem /= axes[k].size();
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= total) return;
            ScanPoint& pt = points[i];
            try {
                RunConfig local = cfg;
                for (const auto& [key, value] : pt.assignment)
                    apply_config_line(local, key + " = " + fmt17(value), 0);
                if (local.physics.alpha == 1.0)
                    local.boundary.theta0 =
                        BoundaryData::forced_theta0(local.physics, local.boundary.a_slope);
                pt.smallness_pass =
                    check_smallness(local.physics, local.boundary, local.solver.smallness_threshold)
                        .pass;
                pt.constants_feasible =
                    find_bootstrap_constants(local.physics, local.boundary).feasible;
                const RadialGrid inner = build_grid(local.boundary.delta, local.boundary.delta,
                                                    local.grid.inner_count, 0,
                                                    effective_grading(local));
                PicardOptions opt;
                opt.tol = local.solver.tol;
                opt.max_iter = local.solver.max_iter;
                opt.smallness_threshold = local.solver.smallness_threshold;
                const PicardResult res = picard_solve(local.physics, local.boundary, inner, opt);
                switch (res.status) {
                    case PicardStatus::converged: pt.picard_status = "converged"; break;
                    case PicardStatus::no_convergence: pt.picard_status = "no-convergence"; break;
                    case PicardStatus::ball_exit: pt.picard_status = "ball-exit"; break;
                    case PicardStatus::contraction_failure:
                        pt.picard_status = "contraction-failure";
                        break;
                    case PicardStatus::smallness_failed:
                        pt.picard_status = "smallness-failed";
                        break;
                }
                pt.iterations = res.history.size();
                pt.final_distance =
                    res.history.empty() ? 0.0 : res.history.back().norm_distance;
            } catch (const std::exception& e) {
                pt.error = e.what();
                pt.picard_status = "error";
            }
        }
    };
    std::vector<std::thread> pool;
    const int jobs = std::max(1, cfg.scan.jobs);
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    std::string csv;
    for (const auto& k : keys) csv += k + ",";
    csv += "smallness,feasible,status,iterations,final_distance\n";
    json rows = json::array();
    for (const auto& pt : points) {
        json row;
        for (const auto& [key, value] : pt.assignment) {
            csv += fmt17(value);
            csv += ',';
            row[key] = value;
        }
        csv += pt.smallness_pass ? "1," : "0,";
        csv += pt.constants_feasible ? "1," : "0,";
        csv += pt.picard_status + "," + std::to_string(pt.iterations) + "," +
               fmt17(pt.final_distance) + "\n";
        row["smallness"] = pt.smallness_pass;
        row["feasible"] = pt.constants_feasible;
        row["status"] = pt.picard_status;
        row["iterations"] = pt.iterations;
        row["final_distance"] = pt.final_distance;
        if (!pt.error.empty()) row["error"] = pt.error;
        rows.push_back(row);
    }
    write_file_atomic((dir / "scan.csv").string(), csv);
    write_file_atomic((dir / "scan.json").string(), rows.dump(2) + "\n");
    return 0;  // a scan succeeds even when points fail hypotheses
}

int run_shrinker_audit(const RunConfig& cfg) {
    const fs::path dir = output_dir(cfg);
    ProfileTriple candidate;
    if (cfg.audit.candidate.size() > 4 &&
        cfg.audit.candidate.substr(cfg.audit.candidate.size() - 4) == ".csv") {
        std::ifstream in(cfg.audit.candidate);
        if (!in) throw ConfigError(0, "audit.candidate", "cannot open " + cfg.audit.candidate);
        candidate = read_profile_csv(in);
    } else {
        const RadialGrid grid = build_grid(cfg.audit.eps, cfg.audit.r_max, cfg.grid.inner_count,
                                           cfg.grid.outer_count, effective_grading(cfg));
        bool found = false;
        for (const auto& spec : bundled_candidate_specs()) {
            if (spec.name == cfg.audit.candidate) {
                candidate = make_shrinker_candidate(spec, grid);
                found = true;
                break;
            }
        }
        if (!found)
            throw ConfigError(0, "audit.candidate",
                              "unknown bundled candidate '" + cfg.audit.candidate + "'");
    }
    const AuditReport rep =
        audit_shrinker(candidate, cfg.physics, cfg.audit.eps, cfg.audit.threshold);
    json j = audit_json(rep);
    j["candidate"] = cfg.audit.candidate;
    write_file_atomic((dir / "audit.json").string(), j.dump(2) + "\n");
    std::cout << "shrinker-audit: verdict " << rep.verdict << ", margin " << rep.margin << "\n";
    return (rep.verdict == "trivial" || rep.verdict == "no-shrinker") ? 0 : 1;
}

int run_constants(const RunConfig& cfg) {
    const fs::path dir = output_dir(cfg);
    const ConstantsSearch cs = find_bootstrap_constants(cfg.physics, cfg.boundary);
    write_file_atomic((dir / "constants.json").string(), constants_json(cs).dump(2) + "\n");
    if (cs.feasible) {
        std::cout << "constants: feasible triple m1=" << cs.consts.m1 << " m1p=" << cs.consts.m1p
                  << " m2=" << cs.consts.m2 << " (min slack " << cs.min_slack << ")\n";
    } else {
        std::cout << "constants: infeasible; tightest violated inequality: " << cs.tightest
                  << "\n";
    }
    return cs.feasible ? 0 : 1;
}

}  // namespace

double envelope_u(double r, const PhysicalParams& pp, const BoundaryData& bd) {
    const double w = pp.alpha < 1.0 ? std::pow(bd.p_delta, 0.5 - 0.5 * pp.alpha) : 1.0;
    return bd.a_slope * r / std::pow(1.0 + w * r, 2);
}

double envelope_uprime(double r, const PhysicalParams& pp, const BoundaryData& bd) {
    const double w = pp.alpha < 1.0 ? std::pow(bd.p_delta, 0.5 - 0.5 * pp.alpha) : 1.0;
    return bd.a_slope / std::pow(1.0 + w * r, 2);
}

double envelope_theta(double r, const BoundaryData& bd) {
    return 1.0 / std::pow(1.0 + std::sqrt(bd.p_delta) * r, 2);
}

double envelope_thetaprime(double r, const BoundaryData& bd) {
    const double w = std::sqrt(bd.p_delta);
    return w * r / std::pow(1.0 + w * r, 2);
}

double density_shape(double r, const PhysicalParams& pp, const BoundaryData& bd) {
    const double expo = 2.0 * pp.d * bd.a_slope / (1.0 - 2.0 * bd.a_slope);
    return bd.p_delta * std::min(1.0, std::pow(r / bd.delta, expo));
}

EnvelopeReport measure_envelopes(const ProfileTriple& profile, const PhysicalParams& pp,
                                 const BoundaryData& bd) {
    EnvelopeReport rep;
    rep.theta_nonneg = true;
    double p_lo = std::numeric_limits<double>::infinity(), p_hi = 0.0;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const double r = profile.grid.nodes[i];
        rep.c_u = std::max(rep.c_u, std::abs(profile.u[i]) / envelope_u(r, pp, bd));
        rep.c_uprime =
            std::max(rep.c_uprime, std::abs(profile.u_prime[i]) / envelope_uprime(r, pp, bd));
        rep.c_theta = std::max(rep.c_theta, profile.theta[i] / envelope_theta(r, bd));
        if (r > 0.0 && envelope_thetaprime(r, bd) > 0.0)
            rep.c_thetaprime = std::max(
                rep.c_thetaprime, std::abs(profile.theta_prime[i]) / envelope_thetaprime(r, bd));
        const double shape = density_shape(r, pp, bd);
        p_lo = std::min(p_lo, profile.p[i] / shape);
        p_hi = std::max(p_hi, profile.p[i] / shape);
        if (profile.theta[i] < 0.0) rep.theta_nonneg = false;
    }
    rep.p_lo = p_lo;
    rep.p_hi = p_hi;
    rep.finite = std::isfinite(rep.c_u) && std::isfinite(rep.c_uprime) &&
                 std::isfinite(rep.c_theta) && std::isfinite(rep.c_thetaprime) &&
                 std::isfinite(rep.p_hi) && rep.p_lo > 0.0;
    return rep;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out << content;
    }
    fs::rename(tmp, path);
}

int run_pipeline(const RunConfig& cfg) {
    if (cfg.command == "solve-expander") return run_solve_expander(cfg);
    if (cfg.command == "verify-residuals") return run_verify_residuals(cfg);
    if (cfg.command == "scan") return run_scan(cfg);
    if (cfg.command == "shrinker-audit") return run_shrinker_audit(cfg);
    if (cfg.command == "constants") return run_constants(cfg);
    throw ConfigError(0, "command", "unknown command '" + cfg.command + "'");
}

}  // namespace ssprof
