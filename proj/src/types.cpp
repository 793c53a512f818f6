#include "ssprof/types.hpp"

#include <cmath>

namespace ssprof {

std::vector<std::string> validate(const PhysicalParams& pp) {
    std::vector<std::string> bad;
    if (pp.d < 3) bad.push_back("d: spatial dimension must be >= 3");
    if (!(pp.alpha > 0.0 && pp.alpha <= 1.0)) bad.push_back("alpha: must lie in (0, 1]");
    if (!(pp.mu0 > 0.0)) bad.push_back("mu0: must be positive");
    if (!(pp.c_v > 0.0)) bad.push_back("c_v: must be positive");
    if (!(pp.kappa > 0.0)) bad.push_back("kappa: must be positive");
    if (!(pp.gas_r > 0.0)) bad.push_back("gas_r: must be positive");
    if (pp.alpha < 1.0 && pp.trace_coeff() != 0.0)
        bad.push_back("lambda0: alpha < 1 requires 2*mu0 + d*lambda0 = 0 exactly");
    if (pp.alpha == 1.0 && !(pp.trace_coeff() > 0.0))
        bad.push_back("lambda0: alpha = 1 requires 2*mu0 + d*lambda0 > 0");
    return bad;
}

std::vector<std::string> validate(const BoundaryData& bd, const PhysicalParams& pp) {
    std::vector<std::string> bad;
    if (!(bd.a_slope > 0.0 && bd.a_slope < 0.5)) bad.push_back("a_slope: must lie in (0, 1/2)");
    if (!(bd.delta > 0.0)) bad.push_back("delta: must be positive");
    if (!(bd.p_delta > 0.0)) bad.push_back("p_delta: must be positive");
    if (bd.theta0 < 0.0) bad.push_back("theta0: must be nonnegative");
    if (pp.alpha < 1.0) {
        const double lo = 0.5 * (1.0 - pp.alpha), hi = 1.0 - pp.alpha;
        if (!(bd.eps_norm > lo && bd.eps_norm < hi))
            bad.push_back("eps_norm: must lie in ((1-alpha)/2, 1-alpha)");
    } else {
        if (!(bd.eps_norm > 0.0 && bd.eps_norm < 1.0))
            bad.push_back("eps_norm: must lie in (0, 1) when alpha = 1");
        const double forced = BoundaryData::forced_theta0(pp, bd.a_slope);
        if (std::abs(bd.theta0 - forced) > 1e-12 * std::max(1.0, std::abs(forced)))
            bad.push_back("theta0: alpha = 1 forces theta0 = (2*mu0 + d*lambda0)*a_slope/gas_r");
    }
    return bad;
}

}  // namespace ssprof
