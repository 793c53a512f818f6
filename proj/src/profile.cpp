#include "ssprof/profile.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ssprof/types.hpp"

namespace ssprof {

namespace {

void require_finite(const std::vector<double>& v, const RadialGrid& g, const char* name) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i])) throw NumericError("nonfinite-output", g.nodes[i], name);
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

void ProfileTriple::check_common() const {
    const std::size_t n = grid.size();
    if (p.size() != n || u.size() != n || theta.size() != n || u_prime.size() != n ||
        theta_prime.size() != n)
        throw std::invalid_argument("ProfileTriple: field sizes disagree with grid");
    require_finite(p, grid, "P");
    require_finite(u, grid, "U");
    require_finite(theta, grid, "Theta");
    require_finite(u_prime, grid, "Uprime");
    require_finite(theta_prime, grid, "Thetaprime");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(p[i] > 0.0)) throw NumericError("nonpositive-density", grid.nodes[i], "P <= 0");
        if (theta[i] < 0.0) throw NumericError("negative-temperature", grid.nodes[i], "Theta < 0");
    }
}

void ProfileTriple::check_expander_drift() const {
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (!(0.5 * grid.nodes[i] - u[i] > 0.0))
            throw NumericError("denominator-vanishing", grid.nodes[i], "r/2 - U <= 0");
}

void ProfileTriple::check_shrinker_drift() const {
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (!(0.5 * grid.nodes[i] + u[i] > 0.0))
            throw NumericError("denominator-vanishing", grid.nodes[i], "r/2 + U <= 0");
}

double ProfileTriple::min_expander_drift() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i)
        m = std::min(m, 0.5 * grid.nodes[i] - u[i]);
    return m;
}

void write_profile_csv(const ProfileTriple& profile, std::ostream& os) {
    os << "r,P,U,Theta,Uprime,Thetaprime\n";
    for (std::size_t i = 0; i < profile.size(); ++i) {
        os << fmt17(profile.grid.nodes[i]) << ',' << fmt17(profile.p[i]) << ','
           << fmt17(profile.u[i]) << ',' << fmt17(profile.theta[i]) << ','
           << fmt17(profile.u_prime[i]) << ',' << fmt17(profile.theta_prime[i]) << '\n';
    }
}

ProfileTriple read_profile_csv(std::istream& is) {
    ProfileTriple pr;
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("profile csv: empty stream");
    if (line.rfind("r,P,U,Theta,Uprime,Thetaprime", 0) != 0)
        throw std::invalid_argument("profile csv: unexpected header '" + line + "'");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        double vals[6];
        char comma;
        for (int k = 0; k < 6; ++k) {
            if (!(row >> vals[k])) throw std::invalid_argument("profile csv: bad row '" + line + "'");
            if (k < 5 && !(row >> comma)) throw std::invalid_argument("profile csv: bad row '" + line + "'");
        }
        pr.grid.nodes.push_back(vals[0]);
        pr.p.push_back(vals[1]);
        pr.u.push_back(vals[2]);
        pr.theta.push_back(vals[3]);
        pr.u_prime.push_back(vals[4]);
        pr.theta_prime.push_back(vals[5]);
    }
    if (pr.grid.nodes.size() < 3) throw std::invalid_argument("profile csv: too few rows");
    pr.grid.inner_count = pr.grid.nodes.size();
    pr.grid.delta = pr.grid.nodes.back();
    pr.grid.r_max = pr.grid.nodes.back();
    pr.grid.grading = 0.0;  // unknown, nodes carry the geometry
    pr.startup.u_slope = pr.u.front() / pr.grid.nodes.front();
    pr.startup.theta_value = pr.theta.front();
    if (pr.p[0] > 0.0 && pr.p[1] > 0.0)
        pr.startup.p_exponent =
            std::log(pr.p[1] / pr.p[0]) / std::log(pr.grid.nodes[1] / pr.grid.nodes[0]);
    return pr;
}

}  // namespace ssprof
