#pragma once

#include <string>
#include <vector>

#include "ssprof/profile.hpp"
#include "ssprof/types.hpp"

namespace ssprof {

// The constants of the global-existence bootstrap.
struct BootstrapConstants {
    double m1 = 0.0, m1p = 0.0, m2 = 0.0;
};

struct InequalityCheck {
    std::string name;
    double lhs = 0.0, rhs = 0.0;  // requirement lhs <= rhs
    double slack = 0.0;           // rhs / lhs (inf when lhs = 0)
    bool pass = false;
};

struct ConstantsSearch {
    bool feasible = false;
    BootstrapConstants consts;
    double min_slack = 0.0;
    std::string tightest;  // tightest satisfied (feasible) or violated (infeasible) inequality
    std::vector<InequalityCheck> checks;  // at the returned / best lattice point
};

// Scans a logarithmic lattice over (m1, m1p, m2) for a triple satisfying the
// whole constant chain, each "much less" concretized as ratio <= chain_ratio.
// Best point = maximal minimum slack, ties broken lexicographically.
ConstantsSearch find_bootstrap_constants(const PhysicalParams& pp, const BoundaryData& bd,
                                         double chain_ratio = 0.1);

// Direct evaluation of the chain at a given triple.
std::vector<InequalityCheck> bootstrap_chain(const PhysicalParams& pp, const BoundaryData& bd,
                                             const BootstrapConstants& c, double chain_ratio);

// The feasible triple that best suits the bootstrap monitor: the lemma lets
// the constants be chosen freely inside the chain, and Z scales with A/M1,
// A/M1' and Theta0/M2, so the monitor wants those ratios minimal rather than
// the slack balanced.
ConstantsSearch find_monitor_constants(const PhysicalParams& pp, const BoundaryData& bd,
                                       double chain_ratio = 0.1);

// Extends the inner profile from delta to r_max by integrating the profile
// ODE system with an embedded Dormand-Prince 5(4) pair. Output nodes are
// log-uniform on (delta, r_max]. Throws NumericError on drift loss or blowup.
ProfileTriple extend_global(const ProfileTriple& inner, const PhysicalParams& pp, double r_max,
                            std::size_t outer_count, double rel_tol = 1e-9);

struct ZMonitorResult {
    std::vector<double> z;  // running sup, one entry per profile node
    double z_delta = 0.0;
    double z_sup = 0.0;
    bool verdict = false;  // Z(delta) <= 1/2 and sup Z <= 1/2
};

// The bootstrap quantity: running sup over s <= r of the four envelope
// normalized profile magnitudes.
ZMonitorResult bootstrap_monitor(const ProfileTriple& profile, const BootstrapConstants& c,
                                 const BoundaryData& bd, const PhysicalParams& pp);

struct AsymptoticFit {
    double p_inf = 0.0, u_inf = 0.0, theta_inf = 0.0;
    double rate_p = 0.0, rate_u = 0.0, rate_theta = 0.0;
    double r_lo = 0.0, r_hi = 0.0;
    double resid_p = 0.0, resid_u = 0.0, resid_theta = 0.0;  // rms residual of the fits
};

// Least-squares fits P ~ p_inf + c/r^2, r U ~ u_inf + c/r^2,
// r^2 Theta ~ theta_inf + c/r^2 over [r_lo, r_hi]; correction exponents from
// a log-log fit of the residual against the fitted constant.
AsymptoticFit fit_asymptotics(const ProfileTriple& profile, double r_lo, double r_hi);

}  // namespace ssprof
