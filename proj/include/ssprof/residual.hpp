#pragma once

#include <vector>

#include "ssprof/profile.hpp"
#include "ssprof/types.hpp"

namespace ssprof {

// Pointwise residuals of the three profile equations. Residual samples are
// raw; *_rel are relative to the largest additive term magnitude at the node,
// maximized over interior nodes inside [window_lo, window_hi].
struct ResidualReport {
    std::vector<double> r;
    std::vector<double> eq_mass, eq_momentum, eq_energy;
    std::vector<double> rel_mass, rel_momentum, rel_energy;
    double max_rel_mass = 0.0, max_rel_momentum = 0.0, max_rel_energy = 0.0;
    double max_abs_mass = 0.0, max_abs_momentum = 0.0, max_abs_energy = 0.0;
    double window_lo = 0.0, window_hi = 0.0;
};

// Substitutes the profile into the expander system. U'' and Theta'' come from
// differentiating the sampled first derivatives; P' from the mass identity
// except in the mass equation itself, which uses the numerical log-derivative
// so it measures consistency of P with U.
ResidualReport residual_expander(const ProfileTriple& profile, const PhysicalParams& pp,
                                 double window_lo, double window_hi);

// Same for the shrinker system (drift signs flipped, degenerate viscous
// corrections in fraction form). P' is numerical throughout: candidates are
// arbitrary profiles.
ResidualReport residual_shrinker(const ProfileTriple& profile, const PhysicalParams& pp,
                                 double window_lo, double window_hi);

}  // namespace ssprof
