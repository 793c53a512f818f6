#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ssprof {

// Viscosity regime of the expander construction. The two regimes use
// different integro-differential kernels and a different norm.
enum class Regime { expander_alpha_lt_1, expander_alpha_eq_1 };

// Constants of the system: dimension, viscosity exponent, heat constant,
// conductivity, gas constant and the Lame prefactors.
struct PhysicalParams {
    int d = 3;
    double alpha = 0.5;
    double c_v = 1.0;
    double kappa = 1.0;
    double gas_r = 1.0;
    double mu0 = 1.0;
    double lambda0 = -2.0 / 3.0;  // 2*mu0 + d*lambda0 = 0 when alpha < 1

    double two_mu_lambda() const { return 2.0 * mu0 + lambda0; }
    double trace_coeff() const { return 2.0 * mu0 + d * lambda0; }

    Regime regime() const {
        return alpha < 1.0 ? Regime::expander_alpha_lt_1 : Regime::expander_alpha_eq_1;
    }

    bool operator==(const PhysicalParams&) const = default;
};

// Free parameters of one profile construction.
struct BoundaryData {
    double a_slope = 1e-3;   // A, initial velocity slope
    double delta = 1e-2;     // matching radius
    double p_delta = 1e-2;   // density at the matching radius
    double theta0 = 1e-3;    // temperature at the origin
    double eps_norm = 0.375; // weight exponent of the norm

    // In the alpha = 1 regime theta0 is determined by the slope.
    static double forced_theta0(const PhysicalParams& pp, double a_slope) {
        return pp.trace_coeff() * a_slope / pp.gas_r;
    }

    bool operator==(const BoundaryData&) const = default;
};

struct NumericError : std::runtime_error {
    NumericError(const std::string& kind, double radius, const std::string& detail)
        : std::runtime_error(kind + " at r=" + std::to_string(radius) + ": " + detail),
          kind(kind),
          radius(radius) {}
    std::string kind;
    double radius;
};

// Returns a list of violated invariants; empty when valid.
std::vector<std::string> validate(const PhysicalParams& pp);
std::vector<std::string> validate(const BoundaryData& bd, const PhysicalParams& pp);

}  // namespace ssprof
