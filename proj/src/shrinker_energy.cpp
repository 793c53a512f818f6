#include "ssprof/shrinker_energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ssprof/calculus.hpp"

namespace ssprof {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t eps_index(const RadialGrid& grid, double eps) {
    // largest node index with r <= eps (the effective split radius)
    std::size_t idx = 0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid.nodes[i] <= eps * (1.0 + 1e-12)) idx = i;
    return idx;
}

}  // namespace

CavitationCheck check_cavitation(const ProfileTriple& profile, const PhysicalParams& pp,
                                 double eps) {
    CavitationCheck out;
    out.eps = eps;
    const auto& r = profile.grid.nodes;
    const double a = pp.alpha;

    std::vector<double> p1ma(r.size()), p1ma_r(r.size()), p_plain(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        p1ma[i] = std::pow(profile.p[i], 1.0 - a);
        p1ma_r[i] = p1ma[i] * r[i];
        p_plain[i] = profile.p[i];
    }
    const double k = profile.startup.p_exponent;
    std::vector<double> int_p1ma = power_law_cumulative(p1ma, profile.grid, k * (1.0 - a));
    std::vector<double> int_p1ma_r =
        power_law_cumulative(p1ma_r, profile.grid, k * (1.0 - a) + 1.0);
    std::vector<double> int_p = power_law_cumulative(p_plain, profile.grid, k);

    out.p_eps = kInf;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] >= eps) out.p_eps = std::min(out.p_eps, profile.p[i]);
        if (r[i] >= eps || r[i] <= 0.0) continue;
        if (!(int_p1ma_r[i] > 0.0) || !(int_p1ma[i] > 0.0)) {
            out.divergent = true;
            continue;
        }
        const double ratio1 = r[i] * int_p1ma[i] / int_p1ma_r[i];
        const double ratio2 = int_p[i] / (std::pow(profile.p[i], a) * int_p1ma[i]);
        out.ratio1_sup = std::max(out.ratio1_sup, ratio1);
        out.ratio2_sup = std::max(out.ratio2_sup, ratio2);
    }
    out.lambda_cap = std::max(out.ratio1_sup, out.ratio2_sup);
    if (!(out.p_eps > 0.0) || !std::isfinite(out.lambda_cap)) out.divergent = true;
    if (out.divergent)
        throw NumericError("divergent-ratio", eps, "cavitation hypothesis ratios unbounded");
    return out;
}

MatrixA build_matrix_A(const ProfileTriple& profile, const PhysicalParams& pp) {
    if (!(pp.c_v <= pp.kappa / pp.two_mu_lambda()))
        throw std::invalid_argument("build_matrix_A: requires C_V <= kappa/(2 mu0 + lambda0)");
    profile.check_shrinker_drift();
    const auto& r = profile.grid.nodes;
    const std::size_t n = r.size();
    const double a = pp.alpha;
    const double tml = pp.two_mu_lambda();
    const double k = profile.startup.p_exponent;

    std::vector<double> g11(n), g12(n), g21(n), g22(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double drift = 0.5 * r[i] + profile.u[i];
        const double p1ma = std::pow(profile.p[i], 1.0 - a);
        g11[i] = pp.c_v / pp.kappa * profile.p[i] * drift;
        g12[i] = pp.gas_r / pp.kappa * profile.p[i] * profile.theta[i];
        g21[i] = pp.gas_r / tml * p1ma;
        g22[i] = p1ma * drift / tml;
    }
    MatrixA m;
    m.a11 = power_law_cumulative(g11, profile.grid, k + 1.0);
    m.a12 = power_law_cumulative(g12, profile.grid, fit_startup_exponent(g12, profile.grid));
    m.a21 = power_law_cumulative(g21, profile.grid, k * (1.0 - a));
    m.a22 = power_law_cumulative(g22, profile.grid, k * (1.0 - a) + 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        m.a11[i] = -m.a11[i];
        m.a12[i] = -m.a12[i];
        m.a21[i] = -m.a21[i];
        m.a22[i] = -m.a22[i];
    }

    m.discriminant.resize(n);
    m.lambda_min.resize(n);
    m.lambda_max.resize(n);
    m.q12.resize(n);
    m.q21.resize(n);
    m.q12q21.resize(n);
    m.d_factor.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = m.a11[i] - m.a22[i];
        if (!(s > 0.0))
            throw NumericError("eigen-degenerate", r[i], "a22 < a11 violated");
        const double prod = m.a12[i] * m.a21[i];
        const double delta = s * s + 4.0 * prod;
        if (!(delta > 0.0))
            throw NumericError("eigen-degenerate", r[i], "discriminant not positive");
        m.discriminant[i] = delta;
        const double sq = std::sqrt(delta);
        const double trace = m.a11[i] + m.a22[i];
        m.lambda_max[i] = 0.5 * (sq - trace);
        // lambda_min = (-trace - sq)/2 suffers cancellation; use the determinant form
        const double det = m.a11[i] * m.a22[i] - prod;
        m.lambda_min[i] = 2.0 * det / (sq - trace);
        m.q12[i] = -2.0 * m.a12[i] / (s + sq);
        m.q21[i] = 2.0 * m.a21[i] / (s + sq);
        m.q12q21[i] = -4.0 * prod / ((s + sq) * (s + sq));
        m.d_factor[i] = 1.0 - m.q12q21[i];
        if (!(std::abs(m.d_factor[i]) >= 1.0))
            throw NumericError("eigen-degenerate", r[i], "|D| >= 1 violated");
    }
    return m;
}

QuadFormTerms quadratic_form_terms(const MatrixA& m, std::size_t node, double a, double b,
                                   double c, double d) {
    QuadFormTerms t;
    const double emin = std::exp(-m.lambda_min[node]);
    const double emax = std::exp(-m.lambda_max[node]);
    const double qq_over_d = m.q12q21[node] / m.d_factor[node];
    t.coef_ac = (1.0 + qq_over_d) * emin - qq_over_d * emax;
    t.coef_bd = (1.0 + qq_over_d) * emax - qq_over_d * emin;
    t.coef_bc = (emin - emax) * m.q12[node] / m.d_factor[node];
    t.coef_ad = (emax - emin) * m.q21[node] / m.d_factor[node];
    t.value = t.coef_ac * a * c + t.coef_bd * b * d + t.coef_bc * b * c + t.coef_ad * a * d;
    return t;
}

QBoundReport verify_q_bounds(const MatrixA& m, const CavitationCheck& cav,
                             const ProfileTriple& profile, const PhysicalParams& pp) {
    QBoundReport rep;
    const auto& r = profile.grid.nodes;
    for (std::size_t i = 0; i < r.size(); ++i) {
        rep.b_sup = std::max(rep.b_sup, std::abs(profile.u[i]) / r[i]);
        rep.sup_pa_theta = std::max(
            rep.sup_pa_theta, std::pow(profile.p[i], pp.alpha) * profile.theta[i]);
    }
    if (!(rep.b_sup < 0.5)) {
        rep.failures.push_back("sup |U/r| >= 1/2");
        return rep;
    }
    const double tml = pp.two_mu_lambda();
    const double half_minus_b = 0.5 - rep.b_sup;
    const double c12 =
        2.0 * tml * pp.gas_r * cav.lambda_cap * rep.sup_pa_theta / (pp.kappa * half_minus_b);
    const double c21 = 2.0 * pp.gas_r * cav.lambda_cap / half_minus_b;
    const double c12_small = std::sqrt(tml / pp.kappa * rep.sup_pa_theta);

    rep.q12_global = rep.q21_global = rep.q12_small = true;
    rep.exp_sqrt_delta_small = rep.exp_lambda_min_small = rep.d_factor_ok = true;
    auto fail = [&rep](bool& flag, const std::string& what, double radius) {
        if (flag) rep.failures.push_back(what + " first violated at r=" + std::to_string(radius));
        flag = false;
    };
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (std::abs(m.q12[i]) > c12 / r[i] * (1.0 + 1e-12))
            fail(rep.q12_global, "|q12| <= 2(2mu0+lambda0) R Lambda sup(P^a Theta)/(kappa (1/2-b) r)",
                 r[i]);
        if (std::abs(m.q21[i]) > c21 / r[i] * (1.0 + 1e-12))
            fail(rep.q21_global, "|q21| <= 2 R Lambda/((1/2-b) r)", r[i]);
        if (std::abs(m.q12[i]) > c12_small * (1.0 + 1e-12))
            fail(rep.q12_small, "|q12| <= sqrt((2mu0+lambda0)/kappa sup P^a Theta)", r[i]);
        if (!(std::abs(m.d_factor[i]) >= 1.0)) fail(rep.d_factor_ok, "|D| >= 1", r[i]);
        if (r[i] < cav.eps) {
            if (std::exp(std::sqrt(m.discriminant[i])) > 2.0)
                fail(rep.exp_sqrt_delta_small, "sup_{0<r<eps} e^{sqrt(Delta)} <= 2", r[i]);
            if (std::exp(m.lambda_min[i]) > 2.0)
                fail(rep.exp_lambda_min_small, "sup_{0<r<eps} e^{lambda_min} <= 2", r[i]);
        }
    }
    rep.all_pass = rep.failures.empty();
    return rep;
}

double smooth_cutoff(double r, double eps) {
    if (r <= eps) return 1.0;
    if (r >= 2.0 * eps) return 0.0;
    const double s = (r - eps) / eps;
    return 1.0 - s * s * (3.0 - 2.0 * s);
}

double smooth_cutoff_deriv(double r, double eps) {
    if (r <= eps || r >= 2.0 * eps) return 0.0;
    const double s = (r - eps) / eps;
    return -6.0 * s * (1.0 - s) / eps;
}

namespace {

// integral over the whole grid of f(r) r^{d-1}
double radial_integral(const std::vector<double>& f, const ProfileTriple& pr, int d) {
    std::vector<double> g(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        g[i] = f[i] * std::pow(pr.grid.nodes[i], d - 1);
    return power_law_cumulative(g, pr.grid, fit_startup_exponent(g, pr.grid)).back();
}

// split integral: value up to eps node and the remainder
std::pair<double, double> radial_integral_split(const std::vector<double>& f,
                                                const ProfileTriple& pr, int d, double eps) {
    std::vector<double> g(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        g[i] = f[i] * std::pow(pr.grid.nodes[i], d - 1);
    std::vector<double> F = power_law_cumulative(g, pr.grid, fit_startup_exponent(g, pr.grid));
    const std::size_t ie = eps_index(pr.grid, eps);
    return {F[ie], F.back() - F[ie]};
}

}  // namespace

EnergyLedger evaluate_LHS(const ProfileTriple& profile, const MatrixA& m,
                          const PhysicalParams& pp, double eps) {
    EnergyLedger led;
    const std::size_t n = profile.size();
    const int d = pp.d;
    led.hardy_constant = std::pow(2.0 / (d - 2), 2);

    std::vector<double> exact(n), low_inner(n), low_outer_t(n), low_outer_u(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double tp = profile.theta_prime[i], up = profile.u_prime[i];
        exact[i] = quadratic_form_terms(m, i, tp, up, tp, up).value;
        const double emax = std::exp(-m.lambda_max[i]);
        const double emin = std::exp(-m.lambda_min[i]);
        low_inner[i] = emax * (tp * tp + up * up);
        low_outer_t[i] = emin * tp * tp;
        low_outer_u[i] = emax * up * up;
    }
    const auto [lhs1, lhs2] = radial_integral_split(exact, profile, d, eps);
    led.lhs1 = lhs1;
    led.lhs2 = lhs2;
    led.lhs_exact = lhs1 + lhs2;
    const auto [low_in, low_in_tail] = radial_integral_split(low_inner, profile, d, eps);
    (void)low_in_tail;
    const auto [t_head, t_tail] = radial_integral_split(low_outer_t, profile, d, eps);
    const auto [u_head, u_tail] = radial_integral_split(low_outer_u, profile, d, eps);
    (void)t_head;
    (void)u_head;
    led.lhs_lower = low_in + 0.25 * (t_tail + u_tail);
    led.int_emin_thp2 = t_head + t_tail;
    led.int_emax_up2 = u_head + u_tail;
    return led;
}

void evaluate_RHS(const ProfileTriple& profile, const MatrixA& m, const PhysicalParams& pp,
                  double eps, EnergyLedger& led) {
    const std::size_t n = profile.size();
    const auto& r = profile.grid.nodes;
    const int d = pp.d;

    std::vector<double> r11(n), r12(n), r12s(n), r12l(n);
    std::vector<double> r21(n), r22d(n), r22c(n), r23(n);
    std::vector<double> n1i(n), n2i(n);
    std::vector<double> emax_pu2(n), emin_pth2(n);

    for (std::size_t i = 0; i < n; ++i) {
        const double R = r[i];
        const double U = profile.u[i], Up = profile.u_prime[i];
        const double Th = profile.theta[i], Thp = profile.theta_prime[i];
        (void)Thp;
        const double P = profile.p[i];
        const double Pa = std::pow(P, pp.alpha);
        const double mu = pp.mu0 * Pa, la = pp.lambda0 * Pa;
        const double two_mu_la = 2.0 * mu + la;  // (2 mu + lambda)(rho)
        const double emin = std::exp(-m.lambda_min[i]);
        const double emax = std::exp(-m.lambda_max[i]);
        const double chi = smooth_cutoff(R, eps);
        const double qq_over_d = m.q12q21[i] / m.d_factor[i];

        // RHS1: row (0, (d-1)U/r^2) paired with (Theta, U)
        const double b1 = (d - 1) * U / (R * R);
        const double coef_bd = (1.0 + qq_over_d) * emax - qq_over_d * emin;
        const double coef_bc = (emin - emax) * m.q12[i] / m.d_factor[i];
        r11[i] = -coef_bd * b1 * U;
        r12[i] = -coef_bc * b1 * Th;
        r12s[i] = chi * chi * r12[i];
        r12l[i] = (1.0 - chi * chi) * r12[i];

        // RHS2: row ((C_V/kappa) P Theta, P U / (2 (2mu+lambda)))
        const double a2 = pp.c_v / pp.kappa * P * Th;
        const double b2 = P * U / (2.0 * two_mu_la);
        const QuadFormTerms q2 = quadratic_form_terms(m, i, a2, b2, Th, U);
        r21[i] = -q2.coef_ac * a2 * Th;
        r22d[i] = -q2.coef_bd * b2 * U;
        r22c[i] = -(q2.coef_bc * b2 * Th + q2.coef_ad * a2 * U);
        r23[i] = emin * m.q12[i] / m.d_factor[i] * b2 * Th;

        // RHS3: the nonlinearities
        const double dU_r = (d - 1) * U / R;
        const double frac = (Up + dU_r) / (0.5 * R + U);
        const double nl1 = -pp.gas_r / pp.kappa * P * Th * dU_r +
                           2.0 * mu / pp.kappa * (Up * Up + dU_r * dU_r) +
                           la / pp.kappa * (Up + dU_r) * (Up + dU_r) -
                           two_mu_la / pp.kappa * pp.alpha * frac * Up * U -
                           la / pp.kappa * pp.alpha * frac * dU_r * U;
        const double nl2 = -pp.alpha * frac * Up - la / two_mu_la * pp.alpha * frac * dU_r;
        const QuadFormTerms q3 = quadratic_form_terms(m, i, nl1, nl2, Th, U);
        n1i[i] = q3.coef_ac * nl1 * Th + q3.coef_ad * nl1 * U;
        n2i[i] = q3.coef_bd * nl2 * U + q3.coef_bc * nl2 * Th;

        emax_pu2[i] = emax * P * U * U / two_mu_la;
        emin_pth2[i] = emin * P * Th * Th;
    }

    led.r11 = radial_integral(r11, profile, d);
    const double r12_unsplit = radial_integral(r12, profile, d);
    led.r12s = radial_integral(r12s, profile, d);
    led.r12l = radial_integral(r12l, profile, d);
    led.cutoff_split_error = std::abs(led.r12s + led.r12l - r12_unsplit);
    led.rhs1 = led.r11 + r12_unsplit;

    led.r21 = radial_integral(r21, profile, d);
    led.r22_diag = radial_integral(r22d, profile, d);
    led.r22_cross = radial_integral(r22c, profile, d);
    const auto [s23, l23] = radial_integral_split(r23, profile, d, eps);
    led.r23s = s23;
    led.r23l = l23;
    led.rhs2 = led.r21 + led.r22_diag + led.r22_cross;

    led.n1_part = radial_integral(n1i, profile, d);
    led.n2_part = radial_integral(n2i, profile, d);
    led.rhs3 = led.n1_part + led.n2_part;

    led.rhs_exact = led.rhs1 + led.rhs2 + led.rhs3;

    led.int_emax_pu2 = radial_integral(emax_pu2, profile, d);
    led.int_emin_pth2 = radial_integral(emin_pth2, profile, d);
    led.rhs_upper = (led.int_emin_thp2 + led.int_emax_up2 - led.int_emax_pu2) / 20.0 -
                    pp.c_v / (4.0 * pp.kappa) * led.int_emin_pth2;

    // truncation beyond r_max, from the <r>^{-2} envelopes
    const std::size_t last = n - 1;
    const double R = r[last];
    const double tail_density =
        std::abs(profile.theta_prime[last] * profile.theta_prime[last]) +
        std::abs(profile.u_prime[last] * profile.u_prime[last]) +
        std::abs(emin_pth2[last]) + std::abs(emax_pu2[last]);
    led.tail_estimate = tail_density * std::pow(R, d - 1) * R / std::max(1.0, 7.0 - d);
}

HardyCheck hardy_inequality_check(const ProfileTriple& profile, int d, double eps) {
    HardyCheck h;
    h.constant = std::pow(2.0 / (d - 2), 2);
    const auto& r = profile.grid.nodes;
    std::vector<double> lhs(r.size()), rhs(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double chi = smooth_cutoff(r[i], eps);
        const double chip = smooth_cutoff_deriv(r[i], eps);
        const double f = chi * profile.theta[i];
        const double fp = chip * profile.theta[i] + chi * profile.theta_prime[i];
        lhs[i] = (f / r[i]) * (f / r[i]);
        rhs[i] = fp * fp;
    }
    h.lhs = radial_integral(lhs, profile, d);
    h.rhs = h.constant * radial_integral(rhs, profile, d);
    h.pass = h.lhs <= h.rhs * (1.0 + 1e-10);
    return h;
}

AuditReport audit_shrinker(const ProfileTriple& profile, const PhysicalParams& pp, double eps,
                           double smallness_threshold) {
    if (pp.alpha >= 1.0)
        throw std::invalid_argument("audit_shrinker: only the 0 < alpha < 1 regime is audited");
    profile.check_shrinker_drift();
    AuditReport rep;
    const auto& r = profile.grid.nodes;

    double sup_r2theta = 0.0, sup_p1ma = 0.0, sup_u_rtheta = 0.0, sup_up_rthp = 0.0;
    double sup_sum = 0.0, sup_b = 0.0, sup_cv = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double R = r[i];
        const double bracket = 1.0 + R * R;
        const double t1 = bracket * profile.theta[i];
        const double t2 = std::pow(profile.p[i], 1.0 - pp.alpha);
        double t3 = 0.0;
        const double den = R * profile.theta[i];
        if (profile.u[i] != 0.0 || den != 0.0)
            t3 = den != 0.0 ? std::abs(profile.u[i] / den) : kInf;
        sup_r2theta = std::max(sup_r2theta, t1);
        sup_p1ma = std::max(sup_p1ma, t2);
        sup_u_rtheta = std::max(sup_u_rtheta, t3);
        sup_sum = std::max(sup_sum, t1 + t2 + t3);
        sup_b = std::max(sup_b, std::abs(profile.u[i]) / R);
        sup_cv = std::max(sup_cv, pp.c_v * 2.0 * pp.two_mu_lambda() *
                                      std::pow(profile.p[i], pp.alpha) / pp.kappa);
        if (R > eps) {
            const double dth = R * profile.theta_prime[i];
            double t4 = 0.0;
            if (profile.u_prime[i] != 0.0 || dth != 0.0)
                t4 = dth != 0.0 ? std::abs(profile.u_prime[i] / dth) : kInf;
            sup_up_rthp = std::max(sup_up_rthp, t4);
        }
    }
    const double hypo_total = sup_sum + sup_up_rthp;
    auto add_h = [&rep](std::string name, double value, double threshold) {
        rep.hypotheses.push_back({std::move(name), value, threshold, value < threshold});
    };
    add_h("sup <r>^2 Theta", sup_r2theta, smallness_threshold);
    add_h("sup P^{1-alpha}", sup_p1ma, smallness_threshold);
    add_h("sup |U/(r Theta)|", sup_u_rtheta, smallness_threshold);
    add_h("sup_{r>eps} |U'/(r Theta')|", sup_up_rthp, smallness_threshold);
    add_h("sup(<r>^2 Theta + P^{1-alpha} + |U/(r Theta)|) + sup|U'/(r Theta')|", hypo_total,
          smallness_threshold);
    add_h("sup |U/r| (< 1/2)", sup_b, 0.5);
    add_h("C_V <= kappa/(2(2mu0+lambda0) P^alpha)", sup_cv, 1.0);

    rep.hypotheses_pass = true;
    for (const auto& h : rep.hypotheses) rep.hypotheses_pass &= h.pass;

    rep.cavitation = check_cavitation(profile, pp, eps);
    const MatrixA m = build_matrix_A(profile, pp);
    rep.qbounds = verify_q_bounds(m, rep.cavitation, profile, pp);
    rep.ledger = evaluate_LHS(profile, m, pp, eps);
    evaluate_RHS(profile, m, pp, eps, rep.ledger);
    rep.margin = rep.ledger.lhs_lower - rep.ledger.rhs_upper;

    double sup_u = 0.0, sup_theta = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        sup_u = std::max(sup_u, std::abs(profile.u[i]));
        sup_theta = std::max(sup_theta, profile.theta[i]);
    }
    const bool trivial = sup_u <= 1e-10 && sup_theta <= 1e-10;

    if (!rep.hypotheses_pass || !rep.qbounds.all_pass)
        rep.verdict = "hypotheses-fail";
    else if (trivial)
        rep.verdict = "trivial";
    else if (rep.margin > 0.0)
        rep.verdict = "no-shrinker";
    else
        rep.verdict = "inconclusive";
    return rep;
}

std::vector<ShrinkerCandidateSpec> bundled_candidate_specs() {
    return {
        {"zero", 0.0, 0.0, 1e-8, 0.0, true, ""},
        {"small-1", 2.0e-4, 1.0e-4, 1e-8, 2.0, true, ""},
        {"small-2", 1.0e-4, 2.0e-4, 1e-8, 2.0, true, ""},
        {"small-3", 2.0e-4, 1.0e-4, 1e-9, 3.0, true, ""},
        {"small-4", 1.5e-4, 1.5e-4, 4e-9, 2.0, true, ""},
        {"small-5", 1.0e-4, 1.0e-4, 1e-8, 4.0, true, ""},
        {"small-6", 2.5e-4, 5.0e-5, 2e-9, 2.0, true, ""},
        {"theta-large", 2.0e-1, 1.0e-4, 1e-8, 2.0, false, "sup <r>^2 Theta"},
        {"velocity-large", 2.0e-4, 3.0e-1, 1e-8, 2.0, false, "sup |U/(r Theta)|"},
        {"density-large", 2.0e-4, 1.0e-4, 4e-2, 2.0, false, "sup P^{1-alpha}"},
    };
}

ProfileTriple make_shrinker_candidate(const ShrinkerCandidateSpec& spec, const RadialGrid& grid) {
    ProfileTriple pr;
    pr.grid = grid;
    const std::size_t n = grid.size();
    pr.p.resize(n);
    pr.u.resize(n);
    pr.theta.resize(n);
    pr.u_prime.resize(n);
    pr.theta_prime.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = grid.nodes[i];
        const double b = 1.0 + r * r;
        const double theta = spec.theta_amp / b;
        const double theta_p = -2.0 * spec.theta_amp * r / (b * b);
        pr.theta[i] = theta;
        pr.theta_prime[i] = theta_p;
        pr.u[i] = spec.u_amp * r * theta;
        pr.u_prime[i] = spec.u_amp * (theta + r * theta_p);
        // cavitating density: p_amp (r/(1+r))^k
        const double base = r / (1.0 + r);
        pr.p[i] = spec.p_amp * (spec.p_exponent == 0.0 ? 1.0 : std::pow(base, spec.p_exponent));
    }
    pr.startup.p_exponent = spec.p_exponent;
    pr.startup.u_slope = pr.u[0] / grid.nodes[0];
    pr.startup.theta_value = pr.theta[0];
    return pr;
}

}  // namespace ssprof
