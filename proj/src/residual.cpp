#include "ssprof/residual.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include "ssprof/calculus.hpp"
#include "ssprof/kernels.hpp"

namespace ssprof {

namespace {

constexpr double kScaleFloor = 1e-300;

double rel(double res, std::initializer_list<double> terms) {
    double scale = kScaleFloor;
    for (double t : terms) scale = std::max(scale, std::abs(t));
    return std::abs(res) / scale;
}

std::vector<double> numeric_p_prime(const ProfileTriple& pr) {
    std::vector<double> logp(pr.size());
    for (std::size_t i = 0; i < pr.size(); ++i) logp[i] = std::log(pr.p[i]);
    std::vector<double> dlogp = differentiate(logp, pr.grid);
    for (std::size_t i = 0; i < pr.size(); ++i) dlogp[i] *= pr.p[i];
    return dlogp;
}

struct Accum {
    ResidualReport rep;
    void push(double r, double m, double mo, double en, double rm, double rmo, double ren,
              bool in_window) {
        rep.r.push_back(r);
        rep.eq_mass.push_back(m);
        rep.eq_momentum.push_back(mo);
        rep.eq_energy.push_back(en);
        rep.rel_mass.push_back(rm);
        rep.rel_momentum.push_back(rmo);
        rep.rel_energy.push_back(ren);
        if (!in_window) return;
        rep.max_rel_mass = std::max(rep.max_rel_mass, rm);
        rep.max_rel_momentum = std::max(rep.max_rel_momentum, rmo);
        rep.max_rel_energy = std::max(rep.max_rel_energy, ren);
        rep.max_abs_mass = std::max(rep.max_abs_mass, std::abs(m));
        rep.max_abs_momentum = std::max(rep.max_abs_momentum, std::abs(mo));
        rep.max_abs_energy = std::max(rep.max_abs_energy, std::abs(en));
    }
};

}  // namespace

ResidualReport residual_expander(const ProfileTriple& profile, const PhysicalParams& par,
                                 double window_lo, double window_hi) {
    profile.check_common();
    profile.check_expander_drift();
    const auto& r = profile.grid.nodes;
    const int d = par.d;
    const double tml = par.two_mu_lambda();

    const std::vector<double> pp_num = numeric_p_prime(profile);
    const std::vector<double> pp_id =
        mass_identity_p_prime(profile.p, profile.u, profile.u_prime, profile.grid, d);
    const std::vector<double> upp = differentiate(profile.u_prime, profile.grid);
    const std::vector<double> thpp = differentiate(profile.theta_prime, profile.grid);

    Accum acc;
    acc.rep.window_lo = window_lo;
    acc.rep.window_hi = window_hi;
    for (std::size_t i = 1; i + 1 < r.size(); ++i) {  // endpoints excluded
        const double R = r[i], P = profile.p[i], U = profile.u[i], Up = profile.u_prime[i];
        const double Th = profile.theta[i], Thp = profile.theta_prime[i];
        const double Upp = upp[i], Thpp = thpp[i];
        const double Ppn = pp_num[i], Pp = pp_id[i];
        const double Pa = std::pow(P, par.alpha);
        const double Pap = par.alpha * std::pow(P, par.alpha - 1.0) * Pp;

        // mass: -r P'/2 + P' U + P (U' + (d-1)U/r), numerical P'
        const double m1 = -0.5 * R * Ppn;
        const double m2 = Ppn * U;
        const double m3 = P * (Up + (d - 1) * U / R);
        const double res_mass = m1 + m2 + m3;

        // momentum
        const double t1 = -0.5 * P * U;
        const double t2 = -0.5 * R * (Pp * U + P * Up);
        const double t3 = Pp * U * U + 2.0 * P * U * Up;
        const double t4 = (d - 1) * P * U * U / R;
        const double t5 = par.gas_r * (Pp * Th + P * Thp);
        const double v1 = tml * Pa * (Upp + (d - 1) * Up / R - (d - 1) * U / (R * R));
        const double v2 = tml * Pap * Up;
        const double v3 = par.lambda0 * Pap * (d - 1) * U / R;
        const double res_mom = t1 + t2 + t3 + t4 + t5 - v1 - v2 - v3;

        // energy
        const double E = 0.5 * U * U + par.c_v * Th;
        const double Ep = U * Up + par.c_v * Thp;
        const double s1 = -P * E;
        const double s2 = -0.5 * R * (Pp * E + P * Ep);
        const double flux = U * P * E + U * P * par.gas_r * Th;
        const double flux_p = Up * P * E + U * Pp * E + U * P * Ep +
                              par.gas_r * (Up * P * Th + U * Pp * Th + U * P * Thp);
        const double s3 = flux_p;
        const double s4 = (d - 1) / R * flux;
        const double s5 = -par.kappa * (Thpp + (d - 1) * Thp / R);
        const double w1 = 2.0 * par.mu0 * Pa * (Up * Up + (d - 1) * U * U / (R * R));
        const double w2 = par.lambda0 * Pa * std::pow(Up + (d - 1) * U / R, 2);
        const double w3 = tml * Pa * (Upp + (d - 1) * Up / R - (d - 1) * U / (R * R)) * U;
        const double w4 = tml * Pap * Up * U;
        const double w5 = par.lambda0 * Pap * (d - 1) * U * U / R;
        const double res_en = s1 + s2 + s3 + s4 + s5 - w1 - w2 - w3 - w4 - w5;

        acc.push(R, res_mass, res_mom, res_en, rel(res_mass, {m1, m2, m3}),
                 rel(res_mom, {t1, t2, t3, t4, t5, v1, v2, v3}),
                 rel(res_en, {s1, s2, s3, s4, s5, w1, w2, w3, w4, w5}),
                 R >= window_lo && R <= window_hi);
    }
    return acc.rep;
}

ResidualReport residual_shrinker(const ProfileTriple& profile, const PhysicalParams& par,
                                 double window_lo, double window_hi) {
    profile.check_common();
    profile.check_shrinker_drift();
    const auto& r = profile.grid.nodes;
    const int d = par.d;
    const double tml = par.two_mu_lambda();

    const std::vector<double> pp_num = numeric_p_prime(profile);
    const std::vector<double> upp = differentiate(profile.u_prime, profile.grid);
    const std::vector<double> thpp = differentiate(profile.theta_prime, profile.grid);

    Accum acc;
    acc.rep.window_lo = window_lo;
    acc.rep.window_hi = window_hi;
    for (std::size_t i = 1; i + 1 < r.size(); ++i) {
        const double R = r[i], P = profile.p[i], U = profile.u[i], Up = profile.u_prime[i];
        const double Th = profile.theta[i], Thp = profile.theta_prime[i];
        const double Upp = upp[i], Thpp = thpp[i];
        const double Pp = pp_num[i];
        const double Pa = std::pow(P, par.alpha);
        const double frac = (Up + (d - 1) * U / R) / (0.5 * R + U);

        const double m1 = 0.5 * R * Pp;
        const double m2 = Pp * U;
        const double m3 = P * (Up + (d - 1) * U / R);
        const double res_mass = m1 + m2 + m3;

        const double t1 = 0.5 * P * U;
        const double t2 = 0.5 * R * (Pp * U + P * Up);
        const double t3 = Pp * U * U + 2.0 * P * U * Up;
        const double t4 = (d - 1) * P * U * U / R;
        const double t5 = par.gas_r * (Pp * Th + P * Thp);
        const double v1 = tml * Pa * (Upp + (d - 1) * Up / R - (d - 1) * U / (R * R));
        const double v2 = -tml * par.alpha * frac * Pa * Up;
        const double v3 = -par.lambda0 * par.alpha * frac * Pa * (d - 1) * U / R;
        const double res_mom = t1 + t2 + t3 + t4 + t5 - v1 - v2 - v3;

        const double E = 0.5 * U * U + par.c_v * Th;
        const double Ep = U * Up + par.c_v * Thp;
        const double s1 = P * E;
        const double s2 = 0.5 * R * (Pp * E + P * Ep);
        const double flux = U * P * E + U * P * par.gas_r * Th;
        const double flux_p = Up * P * E + U * Pp * E + U * P * Ep +
                              par.gas_r * (Up * P * Th + U * Pp * Th + U * P * Thp);
        const double s3 = flux_p;
        const double s4 = (d - 1) / R * flux;
        const double s5 = -par.kappa * (Thpp + (d - 1) * Thp / R);
        const double w1 = 2.0 * par.mu0 * Pa * (Up * Up + (d - 1) * U * U / (R * R));
        const double w2 = par.lambda0 * Pa * std::pow(Up + (d - 1) * U / R, 2);
        const double w3 = tml * Pa * (Upp + (d - 1) * Up / R - (d - 1) * U / (R * R)) * U;
        const double w4 = -tml * par.alpha * frac * Pa * Up * U;
        const double w5 = -par.lambda0 * par.alpha * frac * Pa * (d - 1) * U * U / R;
        const double res_en = s1 + s2 + s3 + s4 + s5 - w1 - w2 - w3 - w4 - w5;

        acc.push(R, res_mass, res_mom, res_en, rel(res_mass, {m1, m2, m3}),
                 rel(res_mom, {t1, t2, t3, t4, t5, v1, v2, v3}),
                 rel(res_en, {s1, s2, s3, s4, s5, w1, w2, w3, w4, w5}),
                 R >= window_lo && R <= window_hi);
    }
    return acc.rep;
}

}  // namespace ssprof
