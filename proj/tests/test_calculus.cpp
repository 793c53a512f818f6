#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "oracle.hpp"
#include "ssprof/calculus.hpp"
#include "ssprof/types.hpp"

using namespace ssprof;

namespace {

RadialGrid inner_grid(double delta, std::size_t n, double rmin_frac = 1e-4) {
    return build_grid(delta, delta, n, 0, grading_for_rmin(n, rmin_frac));
}

std::vector<double> sample(const RadialGrid& g, double (*f)(double)) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g.nodes[i]);
    return v;
}

}  // namespace

TEST_CASE("zero integrand gives zero integral and zero error estimate") {
    const RadialGrid g = inner_grid(1.0, 64);
    std::vector<double> f(g.size(), 0.0);
    QuadratureReport rep;
    const auto F = cumulative_integral(f, g, RadialWeight::one, 3, 0.0, &rep);
    for (double v : F) CHECK(v == 0.0);
    CHECK(rep.err_est == 0.0);
    CHECK(rep.refinements == 1);
}

TEST_CASE("linear integrand is exact for the trapezoid rule") {
    const RadialGrid g = inner_grid(1.0, 512);
    const auto F = cumulative_integral(sample(g, +[](double s) { return s; }), g,
                                       RadialWeight::one, 3, 1.0, nullptr);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double exact = 0.5 * g.nodes[i] * g.nodes[i];
        CHECK(std::abs(F[i] - exact) <= 1e-8 * exact);
    }
}

TEST_CASE("singular startup: s^{-0.7} against the closed form") {
    const RadialGrid g = inner_grid(1.0, 4096);
    const auto F = cumulative_integral(sample(g, +[](double s) { return std::pow(s, -0.7); }), g,
                                       RadialWeight::one, 3, -0.7, nullptr);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double exact = std::pow(g.nodes[i], 0.3) / 0.3;
        CHECK(std::abs(F[i] - exact) <= 1e-6 * exact);
    }
}

TEST_CASE("startup divergence is rejected") {
    const RadialGrid g = inner_grid(1.0, 64);
    std::vector<double> f(g.size(), 1.0);
    CHECK_THROWS_AS(cumulative_integral(f, g, RadialWeight::one, 3, -1.0, nullptr), NumericError);
}

TEST_CASE("cumulative integral is linear and monotone") {
    const RadialGrid g = inner_grid(2.0, 128);
    oracle::Rng rng(2024);
    std::vector<double> f1(g.size()), f2(g.size()), combo(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        f1[i] = rng.uniform(0.0, 2.0);
        f2[i] = rng.uniform(-1.0, 1.0);
        combo[i] = 3.0 * f1[i] - 2.0 * f2[i];
    }
    const auto F1 = cumulative_integral(f1, g, RadialWeight::r, 3, 0.0, nullptr);
    const auto F2 = cumulative_integral(f2, g, RadialWeight::r, 3, 0.0, nullptr);
    const auto Fc = cumulative_integral(combo, g, RadialWeight::r, 3, 0.0, nullptr);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(Fc[i] == doctest::Approx(3.0 * F1[i] - 2.0 * F2[i]).epsilon(1e-12));
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(F1[i] >= F1[i - 1]);  // f1 >= 0
}

TEST_CASE("weight r^{d-1} matches the analytic moment") {
    const RadialGrid g = inner_grid(1.0, 2048);
    std::vector<double> ones(g.size(), 1.0);
    const auto F = cumulative_integral(ones, g, RadialWeight::r_pow_dm1, 5, 0.0, nullptr);
    CHECK(F.back() == doctest::Approx(1.0 / 5.0).epsilon(1e-6));
}

TEST_CASE("power-law product rule is exact on power laws") {
    const RadialGrid g = inner_grid(1.0, 64);
    for (double p : {-0.9, -0.3, 0.0, 0.7, 2.0, 5.5}) {
        std::vector<double> f(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) f[i] = 3.7 * std::pow(g.nodes[i], p);
        const auto F = power_law_cumulative(f, g, p);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double exact = 3.7 * std::pow(g.nodes[i], p + 1.0) / (p + 1.0);
            CHECK(std::abs(F[i] - exact) <= 1e-13 * exact);
        }
    }
}

TEST_CASE("exp-kernel cumulative against a brute-force oracle") {
    const RadialGrid g = inner_grid(1.0, 16384, 1e-3);
    std::vector<double> f(g.size()), K(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.nodes[i];
        f[i] = r * r * (1.0 + 0.5 * r);
        K[i] = 0.8 * r * r;  // nondecreasing kernel exponent
    }
    const auto J = exp_kernel_cumulative(f, K, g, 2.0);
    for (std::size_t i : {std::size_t(3200), std::size_t(9600), g.size() - 1}) {
        const double R = g.nodes[i];
        const double exact = oracle::integrate(
            [R](double s) {
                return s * s * (1.0 + 0.5 * s) * std::exp(0.8 * (s * s - R * R));
            },
            0.0, R);
        CHECK(J[i] == doctest::Approx(exact).epsilon(1e-7));
    }
}

TEST_CASE("differentiate: constants and quadratics are exact") {
    const RadialGrid g = inner_grid(1.0, 128);
    std::vector<double> c(g.size(), 4.25);
    for (double v : differentiate(c, g)) CHECK(std::abs(v) <= 1e-12);
    const auto df = differentiate(sample(g, +[](double r) { return r * r; }), g);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(std::abs(df[i] - 2.0 * g.nodes[i]) <= 1e-12);
}

TEST_CASE("differentiate converges at second order") {
    auto max_err = [](std::size_t n) {
        const RadialGrid g = build_grid(3.0, 3.0, n, 0, 1.0);
        std::vector<double> f(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::sin(g.nodes[i]);
        const auto df = differentiate(f, g);
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            err = std::max(err, std::abs(df[i] - std::cos(g.nodes[i])));
        return err;
    };
    const double e1 = max_err(512), e2 = max_err(1024);
    CHECK(e1 / e2 >= 3.0);  // ~4 for a second-order scheme
}

TEST_CASE("differentiate then integrate recovers a smooth function at O(h^2)") {
    auto recover_err = [](std::size_t n) {
        const RadialGrid g = inner_grid(2.0, n, 1e-3);
        std::vector<double> f(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::cos(g.nodes[i]);
        const auto df = differentiate(f, g);
        const auto F = cumulative_integral(df, g, RadialWeight::one, 3, 1.0, nullptr);
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            err = std::max(err, std::abs((F[i] - F[0]) - (f[i] - f[0])));
        return err;
    };
    CHECK(recover_err(512) / recover_err(1024) >= 3.0);
}

TEST_CASE("richardson error estimate tracks the true error") {
    const RadialGrid g = inner_grid(1.0, 256);
    QuadratureReport rep;
    const auto F = cumulative_integral(sample(g, +[](double s) { return std::exp(s); }), g,
                                       RadialWeight::one, 3, 0.0, &rep);
    const double exact = std::exp(1.0) - 1.0;
    const double true_err = std::abs(F.back() - exact);
    CHECK(rep.err_est >= 0.1 * true_err);
    CHECK(rep.err_est <= 100.0 * std::max(true_err, 1e-15));
}
