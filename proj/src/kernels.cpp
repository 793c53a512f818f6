#include "ssprof/kernels.hpp"

#include <cmath>

namespace ssprof {

namespace {

double expander_drift(double r, double u_val) {
    const double den = 0.5 * r - u_val;
    if (!(den > 0.0)) throw NumericError("denominator-vanishing", r, "r/2 - U <= 0");
    return den;
}

}  // namespace

double startup_v_slope(double u1, double r1, int d) {
    const double a = u1 / r1;
    return static_cast<double>(d) * a / (0.5 - a);
}

double density_log_slope(std::span<const double> p, const RadialGrid& grid) {
    if (p.size() < 2 || !(p[0] > 0.0) || !(p[1] > 0.0)) return 0.0;
    const double s = std::log(p[1] / p[0]) / std::log(grid.nodes[1] / grid.nodes[0]);
    return std::isfinite(s) ? s : 0.0;
}

std::vector<double> compute_V(std::span<const double> u, std::span<const double> u_prime,
                              const RadialGrid& grid, int d) {
    const auto& r = grid.nodes;
    std::vector<double> g(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        g[i] = (u_prime[i] + (d - 1) * u[i] / r[i]) / expander_drift(r[i], u[i]);
    // split off the c/s startup singularity; the remainder has a finite startup
    const double c = startup_v_slope(u[0], r[0], d);
    std::vector<double> rem(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) rem[i] = g[i] - c / r[i];
    std::vector<double> v = power_law_cumulative(rem, grid, fit_startup_exponent(rem, grid));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += c * std::log(r[i]);
    return v;
}

std::vector<double> compute_Vtilde(std::span<const double> u, std::span<const double> u_prime,
                                   const RadialGrid& grid) {
    const auto& r = grid.nodes;
    std::vector<double> g(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        g[i] = (u_prime[i] - u[i] / r[i]) / expander_drift(r[i], u[i]);
    return power_law_cumulative(g, grid, fit_startup_exponent(g, grid));
}

std::vector<double> compute_W(std::span<const double> p, const RadialGrid& grid,
                              const PhysicalParams& pp, double p_startup_exponent) {
    const auto& r = grid.nodes;
    const double coeff = pp.two_mu_lambda();
    std::vector<double> w(p.size());
    if (pp.alpha == 1.0) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = r[i] * r[i] / (4.0 * coeff);
        return w;
    }
    std::vector<double> g(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        g[i] = std::pow(p[i], 1.0 - pp.alpha) * r[i] * 0.5 / coeff;
    return power_law_cumulative(g, grid, p_startup_exponent * (1.0 - pp.alpha) + 1.0);
}

std::vector<double> compute_Z(std::span<const double> p, const RadialGrid& grid,
                              const PhysicalParams& pp, double p_startup_exponent) {
    const auto& r = grid.nodes;
    std::vector<double> g(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) g[i] = pp.c_v / pp.kappa * p[i] * r[i] * 0.5;
    return power_law_cumulative(g, grid, p_startup_exponent + 1.0);
}

std::vector<double> mass_identity_p_prime(std::span<const double> p, std::span<const double> u,
                                          std::span<const double> u_prime, const RadialGrid& grid,
                                          int d) {
    const auto& r = grid.nodes;
    std::vector<double> pp(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        pp[i] = p[i] * (u_prime[i] + (d - 1) * u[i] / r[i]) / expander_drift(r[i], u[i]);
    return pp;
}

std::vector<double> density_from_V(std::span<const double> v, std::size_t delta_index,
                                   double p_delta) {
    std::vector<double> p(v.size());
    const double v_delta = v[delta_index];
    for (std::size_t i = 0; i < v.size(); ++i) p[i] = p_delta * std::exp(v[i] - v_delta);
    return p;
}

}  // namespace ssprof
