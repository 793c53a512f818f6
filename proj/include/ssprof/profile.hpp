#pragma once

#include <iosfwd>
#include <vector>

#include "ssprof/grid.hpp"

namespace ssprof {

// Leading-order coefficients used below r_min: P ~ (r)^p_exponent up to a
// factor, U ~ u_slope * r, Theta ~ theta_value.
struct StartupCoeffs {
    double p_exponent = 0.0;
    double u_slope = 0.0;
    double theta_value = 0.0;
};

// Sampled (P, U, Theta) with first derivatives of U and Theta.
struct ProfileTriple {
    RadialGrid grid;
    std::vector<double> p;
    std::vector<double> u;
    std::vector<double> theta;
    std::vector<double> u_prime;
    std::vector<double> theta_prime;
    StartupCoeffs startup;

    std::size_t size() const { return grid.size(); }

    // Throws NumericError when a pointwise invariant fails.
    void check_common() const;          // p > 0, theta >= 0, everything finite
    void check_expander_drift() const;  // r/2 - U > 0 at every node
    void check_shrinker_drift() const;  // r/2 + U > 0 at every node

    double min_expander_drift() const;  // min over nodes of r/2 - U
};

// CSV with header r,P,U,Theta,Uprime,Thetaprime, 17 significant digits.
void write_profile_csv(const ProfileTriple& profile, std::ostream& os);
ProfileTriple read_profile_csv(std::istream& is);

}  // namespace ssprof
