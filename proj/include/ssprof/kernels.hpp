#pragma once

#include <span>
#include <vector>

#include "ssprof/calculus.hpp"
#include "ssprof/grid.hpp"
#include "ssprof/types.hpp"

namespace ssprof {

// Cumulative kernel functions of one iterate, sampled on the inner grid.
struct KernelSet {
    std::vector<double> v;        // mass-equation integral, log P up to a constant
    std::vector<double> v_tilde;  // stabilization integral
    std::vector<double> w;        // momentum integrating factor exponent
    std::vector<double> z;        // energy integrating factor exponent
    std::vector<double> f_u;
    std::vector<double> f_theta;
    Regime regime = Regime::expander_alpha_lt_1;
};

// V(r) = int_0^r (U' + (d-1)U/s) / (s/2 - U) ds. The integrand is c/s at the
// origin with c = d*A/(1/2 - A) for startup slope A = u(r_min)/r_min, so V is
// pinned to c*ln(r_min) at the first node and accumulated from there.
// Throws NumericError("denominator-vanishing") when r/2 - U <= 0.
std::vector<double> compute_V(std::span<const double> u, std::span<const double> u_prime,
                              const RadialGrid& grid, int d);

// Vtilde(r) = int_0^r (U' - U/s) / (s/2 - U) ds; finite at the origin.
std::vector<double> compute_Vtilde(std::span<const double> u, std::span<const double> u_prime,
                                   const RadialGrid& grid);

// W(r) = 1/(2 mu0 + lambda0) int_0^r P^{1-alpha} s/2 ds; closed form
// r^2 / (4 (2 mu0 + lambda0)) when alpha = 1.
std::vector<double> compute_W(std::span<const double> p, const RadialGrid& grid,
                              const PhysicalParams& pp, double p_startup_exponent);

// Z(r) = (C_V / kappa) int_0^r P s/2 ds.
std::vector<double> compute_Z(std::span<const double> p, const RadialGrid& grid,
                              const PhysicalParams& pp, double p_startup_exponent);

// P' from the mass equation, P' = P (U' + (d-1)U/r) / (r/2 - U);
// never formed by differencing P.
std::vector<double> mass_identity_p_prime(std::span<const double> p, std::span<const double> u,
                                          std::span<const double> u_prime, const RadialGrid& grid,
                                          int d);

// P on the full grid from the exponential mass formula P = P_delta e^{V - V(delta)}.
std::vector<double> density_from_V(std::span<const double> v, std::size_t delta_index,
                                   double p_delta);

double startup_v_slope(double u1, double r1, int d);  // d*A/(1/2 - A) with A = u1/r1

// log-log slope of the density at the origin, from the first two samples
double density_log_slope(std::span<const double> p, const RadialGrid& grid);

}  // namespace ssprof
