#include "ssprof/calculus.hpp"

#include <cmath>
#include <stdexcept>

#include "ssprof/types.hpp"

namespace ssprof {

namespace {

// int_{r0}^{r1} of the power law through (r0, g0), (r1, g1).
double power_law_increment(double r0, double r1, double g0, double g1) {
    const double h = r1 - r0;
    if (g0 == 0.0 || g1 == 0.0 || (g0 > 0.0) != (g1 > 0.0))
        return 0.5 * (g0 + g1) * h;
    const double lq = std::log(r1 / r0);
    const double p = std::log(g1 / g0) / lq;
    if (!std::isfinite(p) || std::abs(p) > 60.0) return 0.5 * (g0 + g1) * h;
    const double a = p + 1.0;
    if (a == 0.0) return g0 * r0 * lq;
    return g0 * r0 * std::expm1(a * lq) / a;
}

double startup_increment(double g1, double r1, double p_total) {
    if (g1 == 0.0) return 0.0;
    if (p_total <= -1.0)
        throw NumericError("startup-divergence", r1,
                           "startup exponent " + std::to_string(p_total) + " not integrable");
    return g1 * r1 / (p_total + 1.0);
}

// integral of s^q over [r0, r1]
double power_measure(double r0, double r1, double q) {
    if (q == -1.0) return std::log(r1 / r0);
    return (std::pow(r1, q + 1.0) - std::pow(r0, q + 1.0)) / (q + 1.0);
}

// weighted composite trapezoid: trapezoid of the regularized factor g = f/s^p
// against the measure s^{q} ds, q = p + weight exponent. Linear in the samples
// and exact on the startup power law.
double weighted_trapezoid_total(const std::vector<double>& r, const std::vector<double>& g,
                                double q, std::size_t stride, double start) {
    double acc = start;
    std::size_t prev = 0;
    for (std::size_t i = stride; i < r.size(); i += stride) {
        acc += 0.5 * (g[prev] + g[i]) * power_measure(r[prev], r[i], q);
        prev = i;
    }
    if (prev != r.size() - 1)
        acc += 0.5 * (g[prev] + g.back()) * power_measure(r[prev], r.back(), q);
    return acc;
}

// derivative of the parabola through three points, evaluated at x; the
// Lagrange derivative weights sum to zero, so the middle sample is subtracted
// out and constants differentiate to exactly zero
double parabola_derivative(double x, double x0, double x1, double x2, double f0, double f1,
                           double f2) {
    const double d0 = (2.0 * x - x1 - x2) / ((x0 - x1) * (x0 - x2));
    const double d2 = (2.0 * x - x0 - x1) / ((x2 - x0) * (x2 - x1));
    return (f0 - f1) * d0 + (f2 - f1) * d2;
}

}  // namespace

double weight_exponent(RadialWeight w, int d) {
    switch (w) {
        case RadialWeight::one: return 0.0;
        case RadialWeight::r: return 1.0;
        case RadialWeight::r_pow_dm1: return static_cast<double>(d - 1);
    }
    return 0.0;
}

std::vector<double> cumulative_integral(std::span<const double> f, const RadialGrid& grid,
                                        RadialWeight weight, int d, double startup_exponent,
                                        QuadratureReport* report) {
    const auto& r = grid.nodes;
    if (f.size() != r.size()) throw std::invalid_argument("cumulative_integral: size mismatch");
    const double wexp = weight_exponent(weight, d);
    const double p = startup_exponent;
    const double q = p + wexp;  // measure exponent of the weighted integrand

    std::vector<double> g(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!std::isfinite(f[i]))
            throw std::invalid_argument("cumulative_integral: nonfinite sample");
        g[i] = f[i] * std::pow(r[i], -p);  // regularized factor
    }

    std::vector<double> F(f.size());
    F[0] = startup_increment(f[0] * std::pow(r[0], wexp), r[0], q);
    for (std::size_t i = 1; i < g.size(); ++i)
        F[i] = F[i - 1] + 0.5 * (g[i - 1] + g[i]) * power_measure(r[i - 1], r[i], q);

    if (report) {
        report->value = F.back();
        report->refinements = 1;
        const double coarse = weighted_trapezoid_total(r, g, q, 2, F[0]);
        report->err_est = std::abs(F.back() - coarse) / 3.0;
    }
    return F;
}

std::vector<double> power_law_cumulative(std::span<const double> g, const RadialGrid& grid,
                                         double startup_exponent) {
    const auto& r = grid.nodes;
    if (g.size() != r.size()) throw std::invalid_argument("power_law_cumulative: size mismatch");
    std::vector<double> F(g.size());
    F[0] = startup_increment(g[0], r[0], startup_exponent);
    for (std::size_t i = 1; i < g.size(); ++i)
        F[i] = F[i - 1] + power_law_increment(r[i - 1], r[i], g[i - 1], g[i]);
    return F;
}

std::vector<double> exp_kernel_cumulative(std::span<const double> g, std::span<const double> K,
                                          const RadialGrid& grid, double startup_exponent) {
    const auto& r = grid.nodes;
    if (g.size() != r.size() || K.size() != r.size())
        throw std::invalid_argument("exp_kernel_cumulative: size mismatch");
    std::vector<double> J(g.size());
    // K(0) = 0; below r_min the kernel factor is within e^{-K[0]} of 1.
    J[0] = startup_increment(g[0], r[0], startup_exponent) * std::exp(-0.5 * K[0]);
    for (std::size_t i = 1; i < g.size(); ++i) {
        const double decay = std::exp(K[i - 1] - K[i]);
        J[i] = decay * J[i - 1] + power_law_increment(r[i - 1], r[i], g[i - 1] * decay, g[i]);
    }
    return J;
}

std::vector<double> differentiate(std::span<const double> f, const RadialGrid& grid) {
    const auto& r = grid.nodes;
    const std::size_t n = r.size();
    if (f.size() != n) throw std::invalid_argument("differentiate: size mismatch");
    if (n < 3) throw std::invalid_argument("differentiate: need at least 3 nodes");
    std::vector<double> df(n);
    df[0] = parabola_derivative(r[0], r[0], r[1], r[2], f[0], f[1], f[2]);
    for (std::size_t i = 1; i + 1 < n; ++i)
        df[i] = parabola_derivative(r[i], r[i - 1], r[i], r[i + 1], f[i - 1], f[i], f[i + 1]);
    df[n - 1] = parabola_derivative(r[n - 1], r[n - 3], r[n - 2], r[n - 1], f[n - 3], f[n - 2],
                                    f[n - 1]);
    return df;
}

double fit_startup_exponent(std::span<const double> g, const RadialGrid& grid) {
    if (g.size() < 2) return 0.0;
    const double g0 = g[0], g1 = g[1];
    if (g0 == 0.0 || g1 == 0.0 || (g0 > 0.0) != (g1 > 0.0)) return 0.0;
    const double p = std::log(g1 / g0) / std::log(grid.nodes[1] / grid.nodes[0]);
    if (!std::isfinite(p)) return 0.0;
    return std::min(12.0, std::max(-0.95, p));
}

}  // namespace ssprof
