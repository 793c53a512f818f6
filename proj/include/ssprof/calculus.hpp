#pragma once

#include <span>
#include <vector>

#include "ssprof/grid.hpp"

namespace ssprof {

struct QuadratureReport {
    double value = 0.0;    // integral up to the last node
    double err_est = 0.0;  // Richardson estimate from one grid coarsening
    int refinements = 0;
};

enum class RadialWeight { one, r, r_pow_dm1 };

double weight_exponent(RadialWeight w, int d);

// F(r_i) = int_0^{r_i} f(s) weight(s) ds by composite trapezoid of the
// regularized factor f/s^p against the measure s^{p + w} ds, where p is the
// startup exponent: linear in f, exact on the startup power law. On
// (0, r_min] f is extended as f(r_min) (s/r_min)^p and integrated in closed
// form. Throws NumericError("startup-divergence") when the weighted startup
// exponent is <= -1 with a nonzero first sample.
std::vector<double> cumulative_integral(std::span<const double> f, const RadialGrid& grid,
                                        RadialWeight weight, int d, double startup_exponent,
                                        QuadratureReport* report = nullptr);

// Same contract, but each interval integrates the local power-law fit of the
// weighted integrand (trapezoid fallback on sign changes). Exact on power-law
// integrands, which is what the kernel integrals of the construction are near
// the vacuum origin; used wherever 1e-8 class accuracy is needed on the
// graded grid.
std::vector<double> power_law_cumulative(std::span<const double> g, const RadialGrid& grid,
                                         double startup_exponent);

// J(r_i) = int_0^{r_i} g(s) e^{K(s) - K(r_i)} ds for nondecreasing K, by the
// rescaled recurrence J_i = e^{K_{i-1}-K_i} J_{i-1} + local increment, so no
// e^{K} is ever formed alone. g carries any radial weight already;
// startup_exponent extends g below r_min.
std::vector<double> exp_kernel_cumulative(std::span<const double> g, std::span<const double> K,
                                          const RadialGrid& grid, double startup_exponent);

// Second-order first derivative on the nonuniform grid; one-sided second
// order at both ends. Requires >= 3 nodes.
std::vector<double> differentiate(std::span<const double> f, const RadialGrid& grid);

// Local power-law exponent of g at the origin, fitted from the first two
// samples and clamped to (-0.95, 12]. Zero when either sample vanishes.
double fit_startup_exponent(std::span<const double> g, const RadialGrid& grid);

}  // namespace ssprof
