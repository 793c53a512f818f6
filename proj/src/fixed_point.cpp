#include "ssprof/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ssprof {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Complement of the homogeneous temperature kernel:
//   Jc(r_i) = int_0^{r_i} g(s) (1 - e^{K(s) - K(r_i)}) ds,
// accumulated without forming 1 - J/M, so it stays accurate when K is tiny.
// J must be the matching exp_kernel_cumulative of g.
std::vector<double> exp_kernel_complement(std::span<const double> g, std::span<const double> K,
                                          std::span<const double> J, const RadialGrid& grid,
                                          double startup_exponent) {
    const auto& r = grid.nodes;
    std::vector<double> jc(g.size());
    jc[0] = -std::expm1(-0.5 * K[0]) * g[0] * r[0] / (startup_exponent + 1.0);
    for (std::size_t i = 1; i < g.size(); ++i) {
        const double decay_def = -std::expm1(K[i - 1] - K[i]);  // 1 - e^{-dK} >= 0
        const double local =
            0.5 * decay_def * g[i - 1] * (r[i] - r[i - 1]);  // integrand vanishes at r_i
        jc[i] = jc[i - 1] + decay_def * J[i - 1] + local;
    }
    return jc;
}

double safe_div(double num, double den, bool* flagged) {
    if (den == 0.0) {
        if (num == 0.0) return 0.0;
        if (flagged) *flagged = true;
        return kInf;
    }
    return num / den;
}

void require_all_finite(std::span<const double> v, const RadialGrid& g, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i])) throw NumericError("nonfinite-output", g.nodes[i], what);
}

}  // namespace

SmallnessReport check_smallness(const PhysicalParams& pp, const BoundaryData& bd,
                                double threshold) {
    SmallnessReport rep;
    rep.regime = pp.regime();
    rep.threshold = threshold;
    rep.a = bd.a_slope;
    rep.p_delta = bd.p_delta;
    rep.delta = bd.delta;
    if (rep.regime == Regime::expander_alpha_lt_1) {
        const double pd1ma = std::pow(bd.p_delta, 1.0 - pp.alpha);
        rep.pd_delta2 = pd1ma * bd.delta * bd.delta;
        rep.pd_theta0_over_a = safe_div(pd1ma * bd.theta0, bd.a_slope, &rep.division_by_zero);
        rep.a_delta_over_theta0 =
            safe_div(bd.a_slope * bd.delta, bd.theta0, &rep.division_by_zero);
        rep.a2_over_theta0 =
            safe_div(bd.a_slope * bd.a_slope, bd.theta0, &rep.division_by_zero);
        rep.p_delta_a = bd.p_delta * bd.a_slope;
        rep.composite = rep.a + rep.p_delta + rep.delta + rep.pd_delta2 + rep.pd_theta0_over_a +
                        rep.a_delta_over_theta0 + rep.a2_over_theta0 + rep.p_delta_a;
    } else {
        rep.a_log_inv_delta = bd.a_slope * std::log(1.0 / bd.delta);
        rep.composite = rep.a_log_inv_delta + rep.p_delta + rep.delta;
    }
    rep.pass = rep.composite < threshold;
    return rep;
}

double norm_Edelta(std::span<const double> u, std::span<const double> u_prime,
                   std::span<const double> theta, std::span<const double> theta_prime,
                   const RadialGrid& inner, const BoundaryData& bd, const PhysicalParams& pp) {
    const auto& r = inner.nodes;
    const std::size_t n = inner.inner_count;
    double sup = 0.0;
    if (pp.regime() == Regime::expander_alpha_lt_1) {
        const double gamma = (1.0 - pp.alpha - bd.eps_norm) * pp.d * bd.a_slope;
        const double w3_coeff =
            bd.a_slope / (std::pow(bd.p_delta, 1.0 - pp.alpha) * bd.theta0);
        const double w45 = bd.a_slope / bd.theta0;
        for (std::size_t i = 0; i < n; ++i) {
            const double uor_prime = u_prime[i] / r[i] - u[i] / (r[i] * r[i]);
            const double w3 = w3_coeff * r[i] * std::pow(r[i] / bd.delta, -gamma);
            const double val = std::abs(u[i]) / r[i] + std::abs(u_prime[i]) +
                               w3 * std::abs(uor_prime) + w45 * std::abs(theta[i]) +
                               w45 * std::abs(theta_prime[i]) / r[i];
            sup = std::max(sup, val);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double uor_prime = u_prime[i] / r[i] - u[i] / (r[i] * r[i]);
            const double val = std::abs(u[i]) / r[i] +
                               std::pow(r[i], 1.0 - bd.eps_norm) * std::abs(uor_prime) +
                               std::abs(theta[i]) + std::abs(theta_prime[i]) / r[i];
            sup = std::max(sup, val);
        }
    }
    return sup;
}

namespace {

double pair_distance(std::span<const double> u1, std::span<const double> up1,
                     std::span<const double> t1, std::span<const double> tp1,
                     std::span<const double> u2, std::span<const double> up2,
                     std::span<const double> t2, std::span<const double> tp2,
                     const RadialGrid& inner, const BoundaryData& bd, const PhysicalParams& pp) {
    const std::size_t n = inner.inner_count;
    std::vector<double> du(n), dup(n), dt(n), dtp(n);
    for (std::size_t i = 0; i < n; ++i) {
        du[i] = u1[i] - u2[i];
        dup[i] = up1[i] - up2[i];
        dt[i] = t1[i] - t2[i];
        dtp[i] = tp1[i] - tp2[i];
    }
    return norm_Edelta(du, dup, dt, dtp, inner, bd, pp);
}

}  // namespace

double distance_Edelta(const IterationState& x, const IterationState& y, const RadialGrid& inner,
                       const BoundaryData& bd, const PhysicalParams& pp) {
    return pair_distance(x.u, x.u_prime, x.theta, x.theta_prime, y.u, y.u_prime, y.theta,
                         y.theta_prime, inner, bd, pp);
}

IterationState seed_state(const BoundaryData& bd, const RadialGrid& inner) {
    IterationState s;
    const std::size_t n = inner.inner_count;
    s.u.resize(n);
    s.u_prime.assign(n, bd.a_slope);
    s.theta.assign(n, bd.theta0);
    s.theta_prime.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) s.u[i] = bd.a_slope * inner.nodes[i];
    return s;
}

double distance_to_center(const IterationState& x, const RadialGrid& inner,
                          const BoundaryData& bd, const PhysicalParams& pp) {
    const IterationState center = seed_state(bd, inner);
    return distance_Edelta(x, center, inner, bd, pp);
}

std::vector<double> compute_F_U(const IterationState& state, std::span<const double> p,
                                std::span<const double> p_prime, const KernelSet& kernels,
                                const RadialGrid& inner, const PhysicalParams& pp,
                                const BoundaryData& bd) {
    const auto& r = inner.nodes;
    const std::size_t n = inner.inner_count;
    const double a = pp.alpha;
    const int d = pp.d;

    std::vector<double> integrand(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double U = state.u[i], Up = state.u_prime[i];
        const double Th = state.theta[i], Thp = state.theta_prime[i];
        const double drift = 0.5 * r[i] - U;
        const double p1ma = std::pow(p[i], 1.0 - a);
        const double pma = std::pow(p[i], -a);
        const double b1 = -0.5 * a * r[i] * p1ma * (d * U / r[i]) * U / drift;
        const double b2 = pma * (p_prime[i] * U * U + 2.0 * p[i] * U * Up);
        const double b3 = (d - 1) * p1ma * U * U / r[i];
        const double b4 = pp.gas_r * (p_prime[i] * Th + p[i] * Thp) * pma;
        integrand[i] = std::exp(a * kernels.v_tilde[i]) * (b1 + b2 + b3 + b4);
    }
    // near vacuum the bracket behaves like (P R Theta)'/P^alpha ~ r^{(1-a) c - 1}
    // with c the cavitation exponent of P; the closed-form startup then equals
    // the integration by parts of that term on (0, r_min].
    const double c_p = density_log_slope(p, inner);
    const double p_start = c_p > 0.0 ? (1.0 - a) * c_p - 1.0
                                     : fit_startup_exponent(integrand, inner);
    std::vector<double> inner_int = power_law_cumulative(integrand, inner, p_start);

    std::vector<double> f_u(n);
    const double lead = pp.two_mu_lambda() * d * bd.a_slope;
    for (std::size_t i = 0; i < n; ++i)
        f_u[i] = std::exp(-a * kernels.v_tilde[i]) * (lead + inner_int[i]);
    return f_u;
}

std::vector<double> compute_F_U_alpha1(const IterationState& state, std::span<const double> p,
                                       std::span<const double> p_prime, const RadialGrid& inner,
                                       const PhysicalParams& pp) {
    const auto& r = inner.nodes;
    const std::size_t n = inner.inner_count;
    const int d = pp.d;

    std::vector<double> g1(n), g2(n);
    for (std::size_t i = 0; i < n; ++i) {
        g1[i] = (d - 1) * p[i] * state.u[i] * state.u[i] / r[i];
        g2[i] = p_prime[i] * (d - 1) * state.u[i] / r[i];
    }
    // startup powers follow P ~ r^c: P U^2 / r ~ r^{c+1}, P' U / r ~ r^{c-1}
    const double c_p = density_log_slope(p, inner);
    std::vector<double> i1 = power_law_cumulative(g1, inner, c_p + 1.0);
    std::vector<double> i2 = power_law_cumulative(
        g2, inner, c_p > 0.0 ? c_p - 1.0 : fit_startup_exponent(g2, inner));

    std::vector<double> f_u(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(p[i] > 0.0)) throw NumericError("division-by-zero", r[i], "P <= 0 in F_U");
        f_u[i] = pp.gas_r * state.theta[i] + state.u[i] * state.u[i] + i1[i] / p[i] +
                 2.0 * pp.mu0 * i2[i] / p[i];
    }
    return f_u;
}

std::vector<double> compute_F_Theta(const IterationState& state, std::span<const double> p,
                                    std::span<const double> p_prime, const RadialGrid& inner,
                                    const PhysicalParams& pp) {
    const auto& r = inner.nodes;
    const std::size_t n = inner.inner_count;
    const int d = pp.d;
    const double tml = pp.two_mu_lambda();

    std::vector<double> core(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double U = state.u[i], Th = state.theta[i];
        const double E = 0.5 * U * U + pp.c_v * Th;
        core[i] = U * p[i] * E + U * p[i] * pp.gas_r * Th;
    }
    std::vector<double> core_int = power_law_cumulative(core, inner, fit_startup_exponent(core, inner));

    std::vector<double> f(n);
    if (pp.alpha < 1.0) {
        std::vector<double> gv(n), gq(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double pa = std::pow(p[i], pp.alpha);
            gv[i] = pa * state.u[i] * state.u_prime[i];
            gq[i] = pa * state.u[i] * state.u[i] / r[i];
        }
        std::vector<double> iv = power_law_cumulative(gv, inner, fit_startup_exponent(gv, inner));
        std::vector<double> iq = power_law_cumulative(gq, inner, fit_startup_exponent(gq, inner));
        for (std::size_t i = 0; i < n; ++i) {
            const double U = state.u[i], Up = state.u_prime[i];
            const double pa = std::pow(p[i], pp.alpha);
            const double dm2_over_r = (d - 2) / r[i];
            f[i] = core[i] + dm2_over_r * core_int[i] -
                   tml * (pa * U * Up + dm2_over_r * iv[i]) -
                   pp.lambda0 * (d - 1) * (pa * U * U / r[i] + dm2_over_r * iq[i]) +
                   pp.kappa / pp.c_v * (U * Up + 0.5 * dm2_over_r * U * U);
        }
    } else {
        std::vector<double> g3(n), g4(n), g5(n), g6(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double U = state.u[i], Up = state.u_prime[i];
            const double pweighted = p_prime[i] + (2 - d) * p[i] / r[i];  // (r^{2-d} P)' / r^{2-d}
            g3[i] = pweighted * r[i] * U * Up;
            g4[i] = pweighted * U * U;
            g5[i] = r[i] * p_prime[i] * U * Up;
            g6[i] = p_prime[i] * U * U;
        }
        std::vector<double> i3 = power_law_cumulative(g3, inner, fit_startup_exponent(g3, inner));
        std::vector<double> i4 = power_law_cumulative(g4, inner, fit_startup_exponent(g4, inner));
        std::vector<double> i5 = power_law_cumulative(g5, inner, fit_startup_exponent(g5, inner));
        std::vector<double> i6 = power_law_cumulative(g6, inner, fit_startup_exponent(g6, inner));
        for (std::size_t i = 0; i < n; ++i) {
            const double U = state.u[i], Up = state.u_prime[i];
            const double dm2_over_r = (d - 2) / r[i];
            f[i] = core[i] + dm2_over_r * core_int[i] +
                   (pp.kappa / pp.c_v - tml) * U * Up +
                   pp.kappa / pp.c_v * 0.5 * dm2_over_r * U * U +
                   tml / r[i] * i3[i] - pp.lambda0 * p[i] * (d - 1) * U * U / r[i] +
                   pp.lambda0 * (d - 1) / r[i] * i4[i] + tml / r[i] * i5[i] +
                   pp.lambda0 * (d - 1) / r[i] * i6[i];
        }
    }
    return f;
}

PhiResult apply_Phi(const IterationState& state, const PhysicalParams& pp,
                    const BoundaryData& bd, const RadialGrid& inner) {
    const auto& r = inner.nodes;
    const std::size_t n = inner.inner_count;
    const int d = pp.d;
    const double tml = pp.two_mu_lambda();

    PhiResult out;
    out.kernels.regime = pp.regime();
    out.kernels.v = compute_V(state.u, state.u_prime, inner, d);
    out.p = density_from_V(out.kernels.v, n - 1, bd.p_delta);
    const std::vector<double> p_prime =
        mass_identity_p_prime(out.p, state.u, state.u_prime, inner, d);
    const double c_startup = density_log_slope(out.p, inner);
    out.kernels.w = compute_W(out.p, inner, pp, c_startup);
    out.kernels.z = compute_Z(out.p, inner, pp, c_startup);

    if (pp.regime() == Regime::expander_alpha_lt_1) {
        out.kernels.v_tilde = compute_Vtilde(state.u, state.u_prime, inner);
        out.kernels.f_u = compute_F_U(state, out.p, p_prime, out.kernels, inner, pp, bd);
    } else {
        out.kernels.v_tilde.assign(n, 0.0);
        out.kernels.f_u = compute_F_U_alpha1(state, out.p, p_prime, inner, pp);
    }
    out.kernels.f_theta = compute_F_Theta(state, out.p, p_prime, inner, pp);

    // velocity map
    std::vector<double> gu(n);
    for (std::size_t i = 0; i < n; ++i)
        gu[i] = std::pow(r[i], d - 1) * out.kernels.f_u[i];
    std::vector<double> ju = exp_kernel_cumulative(gu, out.kernels.w, inner, double(d - 1));

    IterationState& nx = out.state;
    nx.iterate_index = state.iterate_index + 1;
    nx.u.resize(n);
    nx.u_prime.resize(n);
    nx.theta.resize(n);
    nx.theta_prime.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        nx.u[i] = std::pow(r[i], 1 - d) * ju[i] / tml;
        const double w_prime = (pp.alpha < 1.0)
                                   ? std::pow(out.p[i], 1.0 - pp.alpha) * r[i] * 0.5 / tml
                                   : r[i] * 0.5 / tml;
        nx.u_prime[i] =
            (1 - d) * nx.u[i] / r[i] - w_prime * nx.u[i] + out.kernels.f_u[i] / tml;
    }

    // temperature map
    std::vector<double> ghom(n), gfrc(n);
    for (std::size_t i = 0; i < n; ++i) {
        ghom[i] = std::pow(r[i], d - 3);
        gfrc[i] = std::pow(r[i], d - 2) * out.kernels.f_theta[i];
    }
    std::vector<double> jg = exp_kernel_cumulative(ghom, out.kernels.z, inner, double(d - 3));
    std::vector<double> jgc =
        exp_kernel_complement(ghom, out.kernels.z, jg, inner, double(d - 3));
    std::vector<double> jh = exp_kernel_cumulative(gfrc, out.kernels.z, inner, double(d - 1));

    for (std::size_t i = 0; i < n; ++i) {
        const double r2md = std::pow(r[i], 2 - d);
        // homogeneous factor and its distance from 1, both cancellation free
        const double omg = (d - 2) * r2md * jgc[i];  // 1 - gfac
        const double gfac = 1.0 - omg;
        const double h = r2md * jh[i] / pp.kappa;  // forcing part
        const double z_prime = pp.c_v * out.p[i] * r[i] * 0.5 / pp.kappa;
        nx.theta[i] = gfac * bd.theta0 - nx.u[i] * nx.u[i] / (2.0 * pp.c_v) + h;
        const double gfac_prime = (d - 2) * omg / r[i] - z_prime * gfac;
        const double h_prime =
            (2 - d) * h / r[i] - z_prime * h + out.kernels.f_theta[i] / pp.kappa;
        nx.theta_prime[i] =
            gfac_prime * bd.theta0 - nx.u[i] * nx.u_prime[i] / pp.c_v + h_prime;
    }

    require_all_finite(nx.u, inner, "Phi velocity output");
    require_all_finite(nx.theta, inner, "Phi temperature output");
    require_all_finite(nx.u_prime, inner, "Phi velocity derivative");
    require_all_finite(nx.theta_prime, inner, "Phi temperature derivative");
    return out;
}

PicardResult picard_solve(const PhysicalParams& pp, const BoundaryData& bd,
                          const RadialGrid& grid, const PicardOptions& opt) {
    PicardResult res;
    res.smallness = check_smallness(pp, bd, opt.smallness_threshold);
    if (opt.require_smallness && !res.smallness.pass) {
        res.status = PicardStatus::smallness_failed;
        res.message = "smallness composite " + std::to_string(res.smallness.composite) +
                      " >= threshold " + std::to_string(res.smallness.threshold);
        return res;
    }
    if (pp.regime() == Regime::expander_alpha_lt_1 && bd.theta0 == 0.0) {
        res.status = PicardStatus::smallness_failed;
        res.message = "theta0 = 0 rejected in the alpha < 1 regime";
        return res;
    }

    const RadialGrid inner = grid.inner_subgrid();
    IterationState cur = seed_state(bd, inner);
    const double ball_radius = 0.5 * bd.a_slope * (1.0 + 1e-9);

    PhiResult phi;
    double prev_ratio = 0.0;
    bool have_prev_ratio = false;
    for (int it = 1; it <= opt.max_iter; ++it) {
        phi = apply_Phi(cur, pp, bd, inner);
        IterationState& nxt = phi.state;
        nxt.norm_distance = distance_Edelta(nxt, cur, inner, bd, pp);
        nxt.contraction_estimate =
            res.history.empty() ? 0.0
                                : (res.history.back().norm_distance > 0.0
                                       ? nxt.norm_distance / res.history.back().norm_distance
                                       : 0.0);
        res.history.push_back(IterationState{nxt.iterate_index,
                                             {},
                                             {},
                                             {},
                                             {},
                                             nxt.norm_distance,
                                             nxt.contraction_estimate});

        const double center_dist = distance_to_center(nxt, inner, bd, pp);
        bool in_ball = center_dist <= ball_radius;
        if (pp.regime() == Regime::expander_alpha_eq_1 && bd.a_slope > 0.0) {
            const double slope = nxt.u[0] / inner.nodes[0];
            if (std::abs(slope - bd.a_slope) > opt.alpha1_slope_tol * bd.a_slope) {
                in_ball = false;
                res.message = "origin slope drifted to " + std::to_string(slope) +
                              " (target " + std::to_string(bd.a_slope) + ")";
            }
        }
        if (!in_ball) {
            res.status = PicardStatus::ball_exit;
            if (res.message.empty())
                res.message = "iterate left the ball: distance " + std::to_string(center_dist) +
                              " > " + std::to_string(0.5 * bd.a_slope);
            cur = nxt;
            break;
        }

        const bool done = nxt.norm_distance <= opt.tol;
        if (!done && it >= 3 && have_prev_ratio &&
            prev_ratio >= opt.contraction_fail_threshold &&
            nxt.contraction_estimate >= opt.contraction_fail_threshold) {
            res.status = PicardStatus::contraction_failure;
            res.message = "two consecutive contraction estimates >= " +
                          std::to_string(opt.contraction_fail_threshold);
            cur = nxt;
            break;
        }
        have_prev_ratio = it >= 2;
        prev_ratio = nxt.contraction_estimate;

        cur = nxt;
        if (done) {
            res.status = PicardStatus::converged;
            break;
        }
        if (it == opt.max_iter) {
            res.status = PicardStatus::no_convergence;
            res.message = "no convergence after " + std::to_string(opt.max_iter) +
                          " iterations, last contraction estimate " +
                          std::to_string(nxt.contraction_estimate);
        }
    }

    res.kernels = phi.kernels;
    res.inner.grid = inner;
    res.inner.u = cur.u;
    res.inner.u_prime = cur.u_prime;
    res.inner.theta = cur.theta;
    res.inner.theta_prime = cur.theta_prime;
    // density consistent with the final iterate
    std::vector<double> v = compute_V(cur.u, cur.u_prime, inner, pp.d);
    res.inner.p = density_from_V(v, inner.inner_count - 1, bd.p_delta);
    res.inner.startup.u_slope = cur.u[0] / inner.nodes[0];
    res.inner.startup.theta_value = cur.theta[0];
    res.inner.startup.p_exponent = startup_v_slope(cur.u[0], inner.nodes[0], pp.d);
    return res;
}

}  // namespace ssprof
